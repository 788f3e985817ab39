use std::sync::atomic::{AtomicU64, Ordering};

/// Counts oracle draws against an optional hard limit.
///
/// `consumed` only grows, and never passes `limit`: a draw that would exceed
/// the limit is refused without being counted.
#[derive(Debug, Default)]
pub struct BudgetCounter {
    consumed: AtomicU64,
    limit: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BudgetRefused {
    pub limit: u64,
}

impl BudgetCounter {
    pub fn unlimited() -> Self {
        BudgetCounter::default()
    }

    pub fn with_limit(limit: u64) -> Self {
        BudgetCounter {
            consumed: AtomicU64::new(0),
            limit: Some(limit),
        }
    }

    pub fn consumed(&self) -> u64 {
        self.consumed.load(Ordering::Acquire)
    }

    pub fn limit(&self) -> Option<u64> {
        self.limit
    }

    pub fn remaining(&self) -> Option<u64> {
        self.limit.map(|l| l - self.consumed())
    }

    /// Reserves one draw.
    pub fn charge(&self) -> Result<(), BudgetRefused> {
        match self.limit {
            None => {
                self.consumed.fetch_add(1, Ordering::AcqRel);
                Ok(())
            }
            Some(limit) => self
                .consumed
                .fetch_update(Ordering::AcqRel, Ordering::Acquire, |c| {
                    (c < limit).then_some(c + 1)
                })
                .map(|_| ())
                .map_err(|_| BudgetRefused { limit }),
        }
    }
}
