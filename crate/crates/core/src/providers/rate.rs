use std::collections::VecDeque;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use super::clock::Clock;

const WINDOW: Duration = Duration::from_secs(60);

/// Shared request pacer: at most `requests_per_minute` acquisitions in any
/// sliding 60-second window.
pub struct RateLimiter {
    limit: usize,
    clock: Arc<dyn Clock>,
    recent: Mutex<VecDeque<Duration>>,
}

impl RateLimiter {
    pub fn new(requests_per_minute: u32, clock: Arc<dyn Clock>) -> Self {
        Self { limit: requests_per_minute.max(1) as usize, clock, recent: Mutex::new(VecDeque::new()) }
    }

    /// Blocks (via the clock) until a request slot is free, then claims it.
    pub fn acquire(&self) {
        loop {
            let wait = {
                let mut recent = self.recent.lock().unwrap();
                let now = self.clock.now();
                while recent.front().is_some_and(|t| now.saturating_sub(*t) >= WINDOW) {
                    recent.pop_front();
                }
                if recent.len() < self.limit {
                    recent.push_back(now);
                    return;
                }
                (recent[0] + WINDOW).saturating_sub(now)
            };
            self.clock.sleep(wait.max(Duration::from_millis(1)));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::providers::ManualClock;

    #[test]
    fn never_exceeds_limit_in_any_window() {
        let clock = Arc::new(ManualClock::new());
        let limiter = RateLimiter::new(5, clock.clone());
        let mut stamps = Vec::new();
        for i in 0..23 {
            if i % 4 == 0 {
                clock.advance(Duration::from_millis(7_300));
            }
            limiter.acquire();
            stamps.push(clock.now());
        }
        for (i, start) in stamps.iter().enumerate() {
            let in_window = stamps[i..].iter().filter(|t| **t - *start < WINDOW).count();
            assert!(in_window <= 5, "{in_window} requests within 60s of {start:?}");
        }
    }

    #[test]
    fn under_limit_does_not_wait() {
        let clock = Arc::new(ManualClock::new());
        let limiter = RateLimiter::new(100, clock.clone());
        for _ in 0..100 {
            limiter.acquire();
        }
        assert!(clock.sleeps().is_empty());
    }
}
