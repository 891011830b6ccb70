//! Append-only JSON-lines event log; sessions are rebuilt by replay.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Result, StenoError};
use crate::plan::{build_stimulus_plan_with, PlanOptions};
use crate::session::{Session, SketchAction};
use crate::stroke::StrokeRecord;

pub const LOG_FILE: &str = "sessions.jsonl";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum SessionEvent {
    Created {
        session: String,
        participant: usize,
        seed: u64,
    },
    Sketch {
        session: String,
        stimulus: String,
        action: SketchAction,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        stroke: Option<StrokeRecord>,
    },
}

#[derive(Debug, Clone)]
pub struct SessionStore {
    path: PathBuf,
}

impl SessionStore {
    /// Log file `sessions.jsonl` inside `dir` (created on first append).
    pub fn in_dir(dir: &Path) -> Self {
        Self {
            path: dir.join(LOG_FILE),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&self, event: &SessionEvent) -> Result<()> {
        if let Some(parent) = self.path.parent() {
            fs::create_dir_all(parent)?;
        }
        let mut line = serde_json::to_vec(event)?;
        line.push(b'\n');
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        f.write_all(&line)?;
        f.sync_data()?;
        Ok(())
    }

    /// All events in write order. A torn final line (no newline, not
    /// parseable) is dropped.
    pub fn events(&self) -> Result<Vec<SessionEvent>> {
        let f = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out = Vec::new();
        let mut lines = BufReader::new(f).split(b'\n').peekable();
        let mut lineno = 0;
        while let Some(line) = lines.next() {
            lineno += 1;
            let line = line?;
            if line.iter().all(u8::is_ascii_whitespace) {
                continue;
            }
            match serde_json::from_slice(&line) {
                Ok(ev) => out.push(ev),
                Err(_) if lines.peek().is_none() => break,
                Err(e) => {
                    return Err(StenoError::Config(format!(
                        "{}:{lineno}: corrupt event: {e}",
                        self.path.display()
                    )))
                }
            }
        }
        Ok(out)
    }

    /// Rebuilds every session from the log.
    pub fn replay(&self, datasets: &[String]) -> Result<BTreeMap<String, Session>> {
        replay_events(&self.events()?, datasets)
    }
}

pub fn replay_events(events: &[SessionEvent], datasets: &[String]) -> Result<BTreeMap<String, Session>> {
    let opts = PlanOptions {
        allow_any_dataset_count: true,
    };
    let mut sessions = BTreeMap::new();
    for ev in events {
        match ev {
            SessionEvent::Created {
                session,
                participant,
                seed,
            } => {
                let plan = build_stimulus_plan_with(datasets, *participant, *seed, opts)?;
                sessions.insert(session.clone(), Session::new(session.clone(), plan));
            }
            SessionEvent::Sketch {
                session,
                stimulus,
                action,
                stroke,
            } => {
                let s = sessions
                    .remove(session)
                    .ok_or_else(|| StenoError::UnknownSession(session.clone()))?;
                let s = s.record_sketch(stimulus, stroke.clone(), *action)?;
                sessions.insert(session.clone(), s);
            }
        }
    }
    Ok(sessions)
}
