use csv::{ReaderBuilder, StringRecord, Terminator, WriterBuilder};

use crate::error::{Error, Result};
use crate::model::{Edge, Node, SpatialNetwork};

const NODE_HEADER: [&str; 3] = ["id", "x", "y"];
const EDGE_HEADER: [&str; 2] = ["src", "dst"];

/// Parses a `id,x,y` nodes document and a `src,dst` edges document.
pub fn parse_csv_network(
    nodes_text: &str,
    edges_text: &str,
    directed: bool,
    geographic: bool,
) -> Result<SpatialNetwork> {
    let nodes = read_records(nodes_text, &NODE_HEADER)?
        .into_iter()
        .map(|(line, rec)| {
            let coord = |i: usize| {
                rec[i].trim().parse::<f64>().map_err(|_| Error::BadNumber {
                    line,
                    column: NODE_HEADER[i].to_string(),
                })
            };
            Ok(Node::new(&rec[0], coord(1)?, coord(2)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let edges = read_records(edges_text, &EDGE_HEADER)?
        .into_iter()
        .map(|(_, rec)| Edge::new(&rec[0], &rec[1]))
        .collect();
    SpatialNetwork::new(nodes, edges, directed, geographic)
}

fn read_records(text: &str, header: &[&str]) -> Result<Vec<(u64, StringRecord)>> {
    let mut reader = ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let got = reader.headers()?.clone();
    if got.iter().ne(header.iter().copied()) {
        return Err(Error::HeaderMismatch {
            expected: header.join(","),
            got: got.iter().collect::<Vec<_>>().join(","),
        });
    }
    reader
        .records()
        .map(|r| {
            let rec = r?;
            let line = rec.position().map_or(0, |p| p.line());
            Ok((line, rec))
        })
        .collect()
}

/// Inverse of [`parse_csv_network`]: returns `(nodes_text, edges_text)`.
pub fn write_csv_network(network: &SpatialNetwork) -> (String, String) {
    let mut nodes = writer();
    nodes.write_record(NODE_HEADER).expect("in-memory write");
    for n in network.nodes() {
        nodes
            .write_record([n.id.as_str(), &n.x.to_string(), &n.y.to_string()])
            .expect("in-memory write");
    }
    let mut edges = writer();
    edges.write_record(EDGE_HEADER).expect("in-memory write");
    for e in network.edges() {
        edges.write_record([&e.src, &e.dst]).expect("in-memory write");
    }
    (finish(nodes), finish(edges))
}

fn writer() -> csv::Writer<Vec<u8>> {
    WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let net = parse_csv_network("id,x,y\nA,0,0\nB,1,0", "src,dst\nA,B", false, false).unwrap();
        assert_eq!(net.node_count(), 2);
        assert_eq!(net.edge_count(), 1);
        assert_eq!(net.nodes()[1], Node::new("B", 1.0, 0.0));
    }

    #[test]
    fn crlf_and_quoting() {
        let net = parse_csv_network(
            "id,x,y\r\n\"a,1\",0.5,-2\r\nb,1e3,0\r\n",
            "src,dst\r\n\"a,1\",b\r\n",
            true,
            false,
        )
        .unwrap();
        assert_eq!(net.nodes()[0].id, "a,1");
        assert_eq!(net.nodes()[1].x, 1000.0);
        assert!(net.directed());
    }

    #[test]
    fn bad_number_reports_line_and_column() {
        let err = parse_csv_network("id,x,y\nA,abc,0", "src,dst\n", false, false).unwrap_err();
        assert_eq!(
            err,
            Error::BadNumber {
                line: 2,
                column: "x".into()
            }
        );
        let err = parse_csv_network("id,x,y\nA,0,0\nB,1,", "src,dst\n", false, false).unwrap_err();
        assert_eq!(
            err,
            Error::BadNumber {
                line: 3,
                column: "y".into()
            }
        );
    }

    #[test]
    fn header_must_match_exactly() {
        let err = parse_csv_network("id,lon,lat\nA,0,0", "src,dst\n", false, false).unwrap_err();
        assert_eq!(
            err,
            Error::HeaderMismatch {
                expected: "id,x,y".into(),
                got: "id,lon,lat".into()
            }
        );
        let err = parse_csv_network("id,x,y\nA,0,0", "from,to\n", false, false).unwrap_err();
        assert!(matches!(err, Error::HeaderMismatch { .. }));
    }

    #[test]
    fn unknown_edge_endpoint_fails_validation() {
        let err = parse_csv_network("id,x,y\nA,0,0", "src,dst\nA,Z", false, false).unwrap_err();
        assert!(matches!(err, Error::DanglingEdge { ref id, .. } if id == "Z"));
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let err = parse_csv_network("id,x,y\nA,0", "src,dst\n", false, false).unwrap_err();
        assert!(matches!(err, Error::Csv(_)));
    }

    #[test]
    fn writer_output_shape() {
        let net = parse_csv_network("id,x,y\nA,0,0.25\nB,-1.5,3", "src,dst\nA,B\nB,A", false, false).unwrap();
        let (n, e) = write_csv_network(&net);
        assert_eq!(n, "id,x,y\nA,0,0.25\nB,-1.5,3\n");
        assert_eq!(e, "src,dst\nA,B\nB,A\n");
    }
}
