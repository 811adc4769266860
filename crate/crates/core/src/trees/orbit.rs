use std::collections::{BTreeSet, VecDeque};

use super::moves::{act_word, QMove};
use super::{Family, Fiber, TreeState};
use crate::{Error, Result};

/// States explored beyond the reporting bound, since orbit paths may leave it briefly.
pub const ORBIT_HEADROOM: i64 = 4;

/// All valid states of the fiber with `max(k, l) ≤ bound`.
pub fn bounded_states(fiber: Fiber, bound: i64) -> Vec<TreeState> {
    let mut out = Vec::new();
    for family in Family::ALL.into_iter().filter(|f| f.fiber() == fiber) {
        let l_max = if family.single_index() { 0 } else { bound };
        for k in 0..=bound {
            for l in 0..=l_max {
                let x = TreeState::new(family, k, l);
                if x.is_valid() {
                    out.push(x);
                }
            }
        }
    }
    out
}

/// States with `max(k, l) ≤ bound` reachable from `start` under `q₀, q∞, q₁, q₋₁` and their inverses.
pub fn orbit(start: TreeState, bound: i64) -> Result<BTreeSet<TreeState>> {
    start.validate().map_err(Error::InvalidInput)?;
    if start.fiber() != Fiber::OverI {
        return Err(Error::InvalidInput(format!("orbit start {start} is not over i")));
    }
    if bound < start.size() {
        return Err(Error::InvalidInput(format!("bound {bound} is below the size of {start}")));
    }
    let limit = bound + ORBIT_HEADROOM;
    let words: Vec<[_; 2]> = QMove::ALL.iter().flat_map(|q| [q.word(), q.inverse_word()]).collect();
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for w in &words {
            let mid = act_word(&w[..1], x)?;
            if mid.size() > limit {
                continue;
            }
            let y = act_word(&w[1..], mid)?;
            if y.size() <= limit && seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    Ok(seen.into_iter().filter(|x| x.size() <= bound).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::Family::*;

    #[test]
    fn bounded_state_counts() {
        // A: 3, D and Dbar: 3·2 each, E and Ebar: 2·3 each.
        assert_eq!(bounded_states(Fiber::OverI, 2).len(), 3 + 6 + 6 + 6 + 6);
        assert_eq!(bounded_states(Fiber::OverMinusI, 2).len(), 3 + 9 + 9 + 6 + 6);
    }

    #[test]
    fn orbit_of_a0_contains_even_families() {
        let orb = orbit(TreeState::a(0), 6).unwrap();
        for k in 0..=6 {
            assert!(orb.contains(&TreeState::a(k)));
        }
        assert!(orb.contains(&TreeState::new(D, 3, 4)));
        assert!(orb.contains(&TreeState::new(E, 2, 2)));
        assert!(orb.contains(&TreeState::new(Dbar, 1, 6)));
        assert!(!orb.contains(&TreeState::new(D, 0, 1)));
    }

    #[test]
    fn rejects_bad_start() {
        assert!(orbit(TreeState::o(0), 4).is_err());
        assert!(orbit(TreeState::a(5), 4).is_err());
    }
}
