//! One JSON document per session plus an append-only `index.jsonl`.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::{project_view, RankedSession, RankedView, SessionError, ViewMode};

const INDEX_FILE: &str = "index.jsonl";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub id: String,
    pub query: String,
    pub created_at: DateTime<Utc>,
}

#[derive(Debug)]
pub struct SessionStore {
    dir: PathBuf,
    index_lock: Mutex<()>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SessionError + '_ {
    move |source| SessionError::Io {
        path: path.to_path_buf(),
        source,
    }
}

impl SessionStore {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, SessionError> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        Ok(SessionStore {
            dir,
            index_lock: Mutex::new(()),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Session ids are UUIDs; anything else cannot name a stored file.
    fn path_for(&self, id: &str) -> Option<PathBuf> {
        uuid::Uuid::parse_str(id)
            .ok()
            .map(|u| self.dir.join(format!("{}.json", u.hyphenated())))
    }

    pub fn save(&self, session: &RankedSession) -> Result<(), SessionError> {
        let path = self
            .path_for(&session.session_id)
            .ok_or_else(|| SessionError::InvalidRequest(format!("bad session id `{}`", session.session_id)))?;
        let json = serde_json::to_vec_pretty(session).expect("sessions serialize");
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, json).map_err(io_err(&tmp))?;
        std::fs::rename(&tmp, &path).map_err(io_err(&path))?;

        let entry = IndexEntry {
            id: session.session_id.clone(),
            query: session.query.clone(),
            created_at: session.created_at,
        };
        let index = self.dir.join(INDEX_FILE);
        let _guard = self.index_lock.lock().unwrap_or_else(|e| e.into_inner());
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&index)
            .map_err(io_err(&index))?;
        let mut line = serde_json::to_string(&entry).expect("index entries serialize");
        line.push('\n');
        file.write_all(line.as_bytes()).map_err(io_err(&index))
    }

    pub fn get(&self, id: &str) -> Result<RankedSession, SessionError> {
        let path = self
            .path_for(id)
            .ok_or_else(|| SessionError::NotFound(id.to_string()))?;
        let bytes = match std::fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(SessionError::NotFound(id.to_string()))
            }
            Err(e) => return Err(io_err(&path)(e)),
        };
        serde_json::from_slice(&bytes).map_err(|e| SessionError::StoreCorrupt {
            path,
            reason: e.to_string(),
        })
    }

    /// Index entries, oldest first. Unreadable lines are skipped.
    pub fn list(&self) -> Result<Vec<IndexEntry>, SessionError> {
        let index = self.dir.join(INDEX_FILE);
        match std::fs::read_to_string(&index) {
            Ok(text) => Ok(text
                .lines()
                .filter_map(|l| serde_json::from_str(l).ok())
                .collect()),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Vec::new()),
            Err(e) => Err(io_err(&index)(e)),
        }
    }

    pub fn rerank_view(&self, id: &str, mode: ViewMode) -> Result<RankedView, SessionError> {
        project_view(&self.get(id)?, mode)
    }
}
