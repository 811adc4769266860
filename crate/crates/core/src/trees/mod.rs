//! Combinatorial labels of the cell decompositions attached to eigenfunction
//! ratios, the `s₀`/`s∞` actions on them, braid rewriting of loop words, and orbits.

mod braid;
mod moves;
mod orbit;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use braid::{braid_rewrite, braid_rewrite_into, FreeWord, Generator, Letter};
pub use moves::{act, act_word, parse_word, q_move, word_to_string, QMove, SMove};
pub use orbit::{bounded_states, orbit, ORBIT_HEADROOM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    Dbar,
    E,
    Ebar,
    Eprime,
    Ebarprime,
    O,
    Q,
    Qbar,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::A,
        Family::D,
        Family::Dbar,
        Family::E,
        Family::Ebar,
        Family::Eprime,
        Family::Ebarprime,
        Family::O,
        Family::Q,
        Family::Qbar,
    ];

    pub fn fiber(self) -> Fiber {
        match self {
            Family::A | Family::D | Family::Dbar | Family::E | Family::Ebar => Fiber::OverI,
            _ => Fiber::OverMinusI,
        }
    }

    /// Families labelled by `k` alone.
    pub fn single_index(self) -> bool {
        matches!(self, Family::A | Family::O)
    }

    fn symbol(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::D => "D",
            Family::Dbar => "Dbar",
            Family::E => "E",
            Family::Ebar => "Ebar",
            Family::Eprime => "Ep",
            Family::Ebarprime => "Ebarp",
            Family::O => "O",
            Family::Q => "Q",
            Family::Qbar => "Qbar",
        }
    }

    fn conjugate(self) -> Family {
        match self {
            Family::A => Family::A,
            Family::O => Family::O,
            Family::D => Family::Dbar,
            Family::Dbar => Family::D,
            Family::E => Family::Ebar,
            Family::Ebar => Family::E,
            Family::Eprime => Family::Ebarprime,
            Family::Ebarprime => Family::Eprime,
            Family::Q => Family::Qbar,
            Family::Qbar => Family::Q,
        }
    }

    /// Smallest admissible `(k, l)`.
    fn minimum(self) -> (i64, i64) {
        match self {
            Family::A | Family::O | Family::Q | Family::Qbar => (0, 0),
            Family::D | Family::Dbar => (0, 1),
            Family::E | Family::Ebar | Family::Eprime | Family::Ebarprime => (1, 0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fiber {
    OverI,
    OverMinusI,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OriginClass {
    PoleAtOrigin,
    ZeroAtOrigin,
}

/// A tree label `(family, k, l)`. For `A` and `O` the second index is kept at zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TreeState {
    pub family: Family,
    pub k: i64,
    pub l: i64,
}

impl TreeState {
    pub const fn new(family: Family, k: i64, l: i64) -> Self {
        Self { family, k, l }
    }

    pub const fn a(k: i64) -> Self {
        Self::new(Family::A, k, 0)
    }

    pub const fn o(k: i64) -> Self {
        Self::new(Family::O, k, 0)
    }

    pub fn fiber(&self) -> Fiber {
        self.family.fiber()
    }

    /// `max(k, l)`, the size used for bounds.
    pub fn size(&self) -> i64 {
        self.k.max(self.l)
    }

    /// `Err` carries a description of the violated constraint.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let (k_min, l_min) = self.family.minimum();
        if self.family.single_index() {
            if self.l != 0 {
                return Err(format!("{} carries no second index", self.family.symbol()));
            }
            if self.k < k_min {
                return Err(format!("{}: k >= {k_min} required, got k = {}", self.family.symbol(), self.k));
            }
            return Ok(());
        }
        if self.k < k_min {
            return Err(format!("{}: k >= {k_min} required, got k = {}", self.family.symbol(), self.k));
        }
        if self.l < l_min {
            return Err(format!("{}: l >= {l_min} required, got l = {}", self.family.symbol(), self.l));
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Complex conjugation: swaps barred and unbarred families, fixes `A` and `O`.
    pub fn conjugate(&self) -> Self {
        Self::new(self.family.conjugate(), self.k, self.l)
    }

    pub fn origin_class(&self) -> Result<OriginClass> {
        self.validate().map_err(Error::InvalidInput)?;
        let by_parity = if self.l % 2 == 0 {
            OriginClass::PoleAtOrigin
        } else {
            OriginClass::ZeroAtOrigin
        };
        match self.family {
            Family::A => Ok(OriginClass::PoleAtOrigin),
            Family::O => Ok(OriginClass::ZeroAtOrigin),
            Family::D | Family::Dbar | Family::E | Family::Ebar => Ok(by_parity),
            _ => Err(Error::Unclassified(self.to_string())),
        }
    }
}

/// Tree of the `n`-th eigenfunction ratio for real `α`: `A_k` for `n = 2k`, `O_k` for `n = 2k + 1`.
pub fn level_to_tree(n: usize) -> TreeState {
    let k = (n / 2) as i64;
    if n.is_multiple_of(2) {
        TreeState::a(k)
    } else {
        TreeState::o(k)
    }
}

impl fmt::Display for TreeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family.single_index() {
            write!(f, "{}[{}]", self.family.symbol(), self.k)
        } else {
            write!(f, "{}[{},{}]", self.family.symbol(), self.k, self.l)
        }
    }
}

impl FromStr for TreeState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse tree state {s:?}; expected e.g. A[2] or D[1,3]"));
        let s = s.trim();
        let open = s.find('[').ok_or_else(bad)?;
        let inner = s[open + 1..].strip_suffix(']').ok_or_else(bad)?;
        let family = Family::ALL
            .into_iter()
            .find(|f| f.symbol() == &s[..open])
            .ok_or_else(bad)?;
        let indices = inner
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        let state = match (family.single_index(), indices.as_slice()) {
            (true, [k]) => TreeState::new(family, *k, 0),
            (false, [k, l]) => TreeState::new(family, *k, *l),
            _ => return Err(bad()),
        };
        state.validate().map_err(Error::InvalidInput)?;
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_examples() {
        assert!(TreeState::a(0).validate().is_ok());
        assert!(TreeState::new(Family::D, 3, 0).validate().is_err());
        assert!(TreeState::new(Family::E, 0, 2).validate().is_err());
        assert!(TreeState::new(Family::Q, 0, 0).validate().is_ok());
        assert!(TreeState::a(-1).validate().is_err());
    }

    #[test]
    fn text_round_trip() {
        for s in ["A[3]", "D[0,1]", "Dbar[2,5]", "E[1,0]", "Ebar[4,2]", "Ep[1,3]", "Ebarp[2,0]", "O[0]", "Q[1,0]", "Qbar[0,7]"] {
            let state: TreeState = s.parse().unwrap();
            assert_eq!(state.to_string(), s);
        }
        for s in ["A[1,2]", "D[1]", "X[1]", "D[1,0]", "Q[1,", "A[x]"] {
            assert!(s.parse::<TreeState>().is_err(), "{s}");
        }
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(TreeState::a(5).conjugate(), TreeState::a(5));
        assert_eq!(TreeState::new(Family::D, 2, 3).conjugate(), TreeState::new(Family::Dbar, 2, 3));
        assert_eq!(TreeState::o(2).conjugate(), TreeState::o(2));
    }

    #[test]
    fn origin_classes() {
        assert_eq!(TreeState::a(3).origin_class().unwrap(), OriginClass::PoleAtOrigin);
        assert_eq!(TreeState::new(Family::D, 2, 3).origin_class().unwrap(), OriginClass::ZeroAtOrigin);
        assert_eq!(TreeState::new(Family::Ebar, 1, 4).origin_class().unwrap(), OriginClass::PoleAtOrigin);
        assert_eq!(TreeState::o(4).origin_class().unwrap(), OriginClass::ZeroAtOrigin);
        assert!(matches!(TreeState::new(Family::Q, 1, 1).origin_class(), Err(Error::Unclassified(_))));
    }

    #[test]
    fn levels_to_trees() {
        assert_eq!(level_to_tree(0), TreeState::a(0));
        assert_eq!(level_to_tree(1), TreeState::o(0));
        assert_eq!(level_to_tree(6), TreeState::a(3));
    }
}
