use std::time::{Duration, Instant};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_STATES: usize = 1_000_000;
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(300);

/// Caps on the size of intermediate automata and on wall-clock time.
#[derive(Debug, Clone)]
pub struct Budget {
    pub max_states: usize,
    deadline: Option<Instant>,
    timeout: Option<Duration>,
}

impl Budget {
    pub fn new(max_states: usize, timeout: Option<Duration>) -> Self {
        Budget {
            max_states,
            deadline: timeout.map(|t| Instant::now() + t),
            timeout,
        }
    }

    pub fn unlimited() -> Self {
        Budget {
            max_states: usize::MAX,
            deadline: None,
            timeout: None,
        }
    }

    pub fn check_states(&self, count: usize, what: &str) -> Result<()> {
        if count > self.max_states {
            return Err(Error::ResourceLimit {
                what: what.to_string(),
                limit: format!("more than {} states", self.max_states),
            });
        }
        Ok(())
    }

    pub fn check_time(&self, what: &str) -> Result<()> {
        match (self.deadline, self.timeout) {
            (Some(deadline), Some(timeout)) if Instant::now() > deadline => Err(Error::ResourceLimit {
                what: what.to_string(),
                limit: format!("wall-clock budget of {:.1}s", timeout.as_secs_f64()),
            }),
            _ => Ok(()),
        }
    }

    pub fn check(&self, count: usize, what: &str) -> Result<()> {
        self.check_states(count, what)?;
        self.check_time(what)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_MAX_STATES, Some(DEFAULT_TIMEOUT))
    }
}
