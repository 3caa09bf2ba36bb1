//! In-memory network store with optional write-through to a directory.
//!
//! Each stored network is persisted as `<id>.nodes.csv`, `<id>.edges.csv`
//! and `<id>.meta.json`, and reloaded when the store is reopened.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use donut_core::ingest::{parse_csv_network, write_csv_network, EDGES_CSV_SUFFIX, NODES_CSV_SUFFIX};
use donut_core::SpatialNetwork;
use serde::{Deserialize, Serialize};

const META_SUFFIX: &str = ".meta.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkMeta {
    pub id: String,
    pub name: String,
    /// Seconds since the Unix epoch.
    pub created_at: u64,
    pub node_count: usize,
    pub edge_count: usize,
    pub directed: bool,
    pub geographic: bool,
}

#[derive(Debug)]
pub struct StoredNetwork {
    pub meta: NetworkMeta,
    pub network: SpatialNetwork,
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("data directory {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("corrupt entry {id} in data directory: {reason}")]
    Corrupt { id: String, reason: String },
}

#[derive(Debug, Default)]
pub struct NetworkStore {
    entries: RwLock<BTreeMap<String, Arc<StoredNetwork>>>,
    next_id: AtomicU64,
    data_dir: Option<PathBuf>,
}

impl NetworkStore {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens a store backed by `dir`, creating it if needed and loading
    /// every network previously written there.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let dir = dir.into();
        let io_err = |source| StoreError::Io {
            path: dir.clone(),
            source,
        };
        fs::create_dir_all(&dir).map_err(io_err)?;
        let mut entries = BTreeMap::new();
        let mut max_seq = 0;
        for entry in fs::read_dir(&dir).map_err(io_err)? {
            let name = entry.map_err(io_err)?.file_name();
            let Some(id) = name.to_str().and_then(|n| n.strip_suffix(META_SUFFIX)) else {
                continue;
            };
            let stored = load_entry(&dir, id)?;
            max_seq = max_seq.max(sequence_of(id).unwrap_or(0));
            entries.insert(id.to_string(), Arc::new(stored));
        }
        Ok(Self {
            entries: RwLock::new(entries),
            next_id: AtomicU64::new(max_seq),
            data_dir: Some(dir),
        })
    }

    pub fn data_dir(&self) -> Option<&Path> {
        self.data_dir.as_deref()
    }

    /// Stores `network` under a fresh id. Identical uploads get distinct ids.
    pub fn insert(&self, name: Option<String>, network: SpatialNetwork) -> Result<Arc<StoredNetwork>, StoreError> {
        let seq = self.next_id.fetch_add(1, Ordering::Relaxed) + 1;
        let id = format!("net{seq}");
        let meta = NetworkMeta {
            name: name.filter(|n| !n.is_empty()).unwrap_or_else(|| id.clone()),
            id: id.clone(),
            created_at: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            node_count: network.node_count(),
            edge_count: network.edge_count(),
            directed: network.directed(),
            geographic: network.geographic(),
        };
        let stored = Arc::new(StoredNetwork { meta, network });
        if let Some(dir) = &self.data_dir {
            persist(dir, &stored)?;
        }
        self.entries.write().expect("store lock").insert(id, stored.clone());
        Ok(stored)
    }

    pub fn get(&self, id: &str) -> Option<Arc<StoredNetwork>> {
        self.entries.read().expect("store lock").get(id).cloned()
    }

    /// Metadata for every stored network, ordered by creation.
    pub fn list(&self) -> Vec<NetworkMeta> {
        let mut metas: Vec<_> = self
            .entries
            .read()
            .expect("store lock")
            .values()
            .map(|s| s.meta.clone())
            .collect();
        metas.sort_by_key(|m| (sequence_of(&m.id), m.id.clone()));
        metas
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("store lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn sequence_of(id: &str) -> Option<u64> {
    id.strip_prefix("net")?.parse().ok()
}

fn persist(dir: &Path, stored: &StoredNetwork) -> Result<(), StoreError> {
    let id = &stored.meta.id;
    let (nodes, edges) = write_csv_network(&stored.network);
    let meta = serde_json::to_string_pretty(&stored.meta).expect("meta serializes");
    // meta last: its presence marks the entry complete
    for (suffix, body) in [(NODES_CSV_SUFFIX, nodes), (EDGES_CSV_SUFFIX, edges), (META_SUFFIX, meta)] {
        let path = dir.join(format!("{id}{suffix}"));
        fs::write(&path, body).map_err(|source| StoreError::Io { path, source })?;
    }
    Ok(())
}

fn load_entry(dir: &Path, id: &str) -> Result<StoredNetwork, StoreError> {
    let read = |suffix: &str| {
        let path = dir.join(format!("{id}{suffix}"));
        fs::read_to_string(&path).map_err(|source| StoreError::Io { path, source })
    };
    let corrupt = |reason: String| StoreError::Corrupt {
        id: id.to_string(),
        reason,
    };
    let meta: NetworkMeta = serde_json::from_str(&read(META_SUFFIX)?).map_err(|e| corrupt(e.to_string()))?;
    if meta.id != id {
        return Err(corrupt(format!("meta names id {}", meta.id)));
    }
    let network = parse_csv_network(
        &read(NODES_CSV_SUFFIX)?,
        &read(EDGES_CSV_SUFFIX)?,
        meta.directed,
        meta.geographic,
    )
    .map_err(|e| corrupt(e.to_string()))?;
    Ok(StoredNetwork { meta, network })
}

#[cfg(test)]
mod tests {
    use super::*;
    use donut_core::{Edge, Node};

    fn pair() -> SpatialNetwork {
        SpatialNetwork::new(
            vec![Node::new("A", 0.0, 0.0), Node::new("B", 1.5, -2.0)],
            vec![Edge::new("A", "B")],
            true,
            false,
        )
        .unwrap()
    }

    #[test]
    fn duplicate_uploads_get_new_ids() {
        let store = NetworkStore::in_memory();
        let a = store.insert(None, pair()).unwrap();
        let b = store.insert(None, pair()).unwrap();
        assert_ne!(a.meta.id, b.meta.id);
        assert_eq!(store.len(), 2);
        assert_eq!(a.meta.name, a.meta.id);
    }

    #[test]
    fn list_follows_creation_order() {
        let store = NetworkStore::in_memory();
        for _ in 0..11 {
            store.insert(None, pair()).unwrap();
        }
        let ids: Vec<_> = store.list().into_iter().map(|m| m.id).collect();
        assert_eq!(ids.first().map(String::as_str), Some("net1"));
        assert_eq!(ids.last().map(String::as_str), Some("net11"));
    }

    #[test]
    fn survives_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let id = {
            let store = NetworkStore::open(dir.path()).unwrap();
            store.insert(Some("pair".into()), pair()).unwrap().meta.id.clone()
        };
        let store = NetworkStore::open(dir.path()).unwrap();
        let back = store.get(&id).unwrap();
        assert_eq!(back.network, pair());
        assert_eq!(back.meta.name, "pair");
        let next = store.insert(None, pair()).unwrap();
        assert_ne!(next.meta.id, id);
    }

    #[test]
    fn half_written_entries_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("net9.nodes.csv"), "id,x,y\n").unwrap();
        let store = NetworkStore::open(dir.path()).unwrap();
        assert!(store.is_empty());
    }

    #[test]
    fn corrupt_entries_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("net1.meta.json"), "{}").unwrap();
        assert!(matches!(NetworkStore::open(dir.path()), Err(StoreError::Corrupt { .. })));
    }
}
