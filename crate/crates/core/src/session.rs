//! Per-participant sketching session state.

use serde::{Deserialize, Serialize};

use crate::error::{Result, StenoError};
use crate::plan::{Assignment, StimulusPlan};
use crate::stroke::StrokeRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SketchAction {
    Accept,
    Reset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StimulusStatus {
    Pending,
    Accepted,
}

/// Stimuli are served strictly in plan order; each accepts one stroke.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub plan: StimulusPlan,
    status: Vec<StimulusStatus>,
    strokes: Vec<Option<StrokeRecord>>,
}

impl Session {
    pub fn new(id: impl Into<String>, plan: StimulusPlan) -> Self {
        let n = plan.assignments.len();
        Self {
            id: id.into(),
            plan,
            status: vec![StimulusStatus::Pending; n],
            strokes: vec![None; n],
        }
    }

    pub fn participant(&self) -> usize {
        self.plan.participant
    }

    /// Index of the next pending stimulus, `None` once complete.
    pub fn current(&self) -> Option<usize> {
        self.status.iter().position(|s| *s == StimulusStatus::Pending)
    }

    pub fn current_assignment(&self) -> Option<&Assignment> {
        self.current().map(|i| &self.plan.assignments[i])
    }

    pub fn is_complete(&self) -> bool {
        self.current().is_none()
    }

    pub fn status(&self) -> &[StimulusStatus] {
        &self.status
    }

    pub fn stroke(&self, index: usize) -> Option<&StrokeRecord> {
        self.strokes.get(index).and_then(Option::as_ref)
    }

    /// Accepted strokes with their plan index.
    pub fn accepted(&self) -> impl Iterator<Item = (usize, &Assignment, &StrokeRecord)> {
        self.strokes
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.as_ref().map(|s| (i, &self.plan.assignments[i], s)))
    }

    pub fn accepted_count(&self) -> usize {
        self.strokes.iter().filter(|s| s.is_some()).count()
    }

    /// Applies one accept/reset for `stimulus` (a dataset id).
    ///
    /// Reset discards the submission and keeps the stimulus pending. Accept
    /// stores the stroke and moves on.
    pub fn record_sketch(
        mut self,
        stimulus: &str,
        stroke: Option<StrokeRecord>,
        action: SketchAction,
    ) -> Result<Session> {
        let idx = self.current().ok_or_else(|| {
            StenoError::Sequencing(format!("session {} is already complete", self.id))
        })?;
        let expected = &self.plan.assignments[idx].dataset;
        if stimulus != expected {
            return Err(StenoError::Sequencing(format!(
                "expected stimulus `{expected}` (#{idx}), got `{stimulus}`"
            )));
        }
        if let Some(s) = &stroke {
            if s.stimulus != stimulus {
                return Err(StenoError::Sequencing(format!(
                    "stroke is tagged for `{}`, not `{stimulus}`",
                    s.stimulus
                )));
            }
            s.validate()?;
        }
        match action {
            SketchAction::Reset => {}
            SketchAction::Accept => {
                let s = stroke.ok_or_else(|| {
                    StenoError::InvalidStroke("accept requires a stroke".into())
                })?;
                self.strokes[idx] = Some(s);
                self.status[idx] = StimulusStatus::Accepted;
            }
        }
        Ok(self)
    }
}
