use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Family::*;
use super::TreeState;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SMove {
    S0,
    S0Inv,
    Sinf,
    SinfInv,
}

impl SMove {
    pub const ALL: [SMove; 4] = [SMove::S0, SMove::S0Inv, SMove::Sinf, SMove::SinfInv];

    pub fn inverse(self) -> SMove {
        match self {
            SMove::S0 => SMove::S0Inv,
            SMove::S0Inv => SMove::S0,
            SMove::Sinf => SMove::SinfInv,
            SMove::SinfInv => SMove::Sinf,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            SMove::S0 => "s0",
            SMove::S0Inv => "s0i",
            SMove::Sinf => "si",
            SMove::SinfInv => "sii",
        }
    }
}

impl fmt::Display for SMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for SMove {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SMove::ALL
            .into_iter()
            .find(|m| m.token() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown move {s:?}; expected one of s0, s0i, si, sii")))
    }
}

/// Parses whitespace-separated move tokens.
pub fn parse_word(text: &str) -> Result<Vec<SMove>> {
    text.split_whitespace().map(str::parse).collect()
}

pub fn word_to_string(word: &[SMove]) -> String {
    word.iter().map(|m| m.token()).collect::<Vec<_>>().join(" ")
}

/// Generators of the fundamental group, as words in the moves applied left to right:
/// `q₀ = s₀²`, `q∞ = s∞²`, `q₋₁ = (s₀ s∞)⁻¹`, `q₁ = (s∞ s₀)⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QMove {
    Q0,
    QInf,
    QMinus1,
    Q1,
}

impl QMove {
    pub const ALL: [QMove; 4] = [QMove::Q0, QMove::QInf, QMove::QMinus1, QMove::Q1];

    pub fn word(self) -> [SMove; 2] {
        match self {
            QMove::Q0 => [SMove::S0, SMove::S0],
            QMove::QInf => [SMove::Sinf, SMove::Sinf],
            QMove::QMinus1 => [SMove::SinfInv, SMove::S0Inv],
            QMove::Q1 => [SMove::S0Inv, SMove::SinfInv],
        }
    }

    pub fn inverse_word(self) -> [SMove; 2] {
        let [a, b] = self.word();
        [b.inverse(), a.inverse()]
    }

    /// The word for `q₀ q₁ q∞ q₋₁`.
    pub fn relation_word() -> Vec<SMove> {
        [QMove::Q0, QMove::Q1, QMove::QInf, QMove::QMinus1]
            .iter()
            .flat_map(|q| q.word())
            .collect()
    }
}

fn s0(x: TreeState) -> TreeState {
    let TreeState { family, k, l } = x;
    match family {
        A => TreeState::new(Q, k, 0),
        Q if l == 0 => TreeState::a(k + 1),
        D => TreeState::new(Q, k, l),
        Q => TreeState::new(D, k + 1, l),
        E => TreeState::new(Eprime, k, l),
        Eprime if k == 1 && l == 0 => TreeState::a(0),
        Eprime if k == 1 => TreeState::new(D, 0, l),
        Eprime => TreeState::new(E, k - 1, l),
        Dbar if l == 1 => TreeState::o(k),
        Dbar => TreeState::new(Qbar, k, l - 2),
        Qbar => TreeState::new(Dbar, k, l + 2),
        Ebar => TreeState::new(Ebarprime, k, l),
        Ebarprime => TreeState::new(Ebar, k, l),
        O => TreeState::new(Dbar, k, 1),
    }
}

fn sinf(x: TreeState) -> TreeState {
    let TreeState { family, k, l } = x;
    match family {
        A if k == 0 => TreeState::new(Ebarprime, 1, 0),
        A => TreeState::new(Qbar, k - 1, 0),
        Qbar if l == 0 => TreeState::a(k),
        D if l == 1 => TreeState::o(k),
        D => TreeState::new(Q, k, l - 2),
        Q => TreeState::new(D, k, l + 2),
        E => TreeState::new(Eprime, k, l),
        Eprime => TreeState::new(E, k, l),
        Dbar if k == 0 => TreeState::new(Ebarprime, 1, l),
        Dbar => TreeState::new(Qbar, k - 1, l),
        Qbar => TreeState::new(Dbar, k, l),
        Ebar => TreeState::new(Ebarprime, k + 1, l),
        Ebarprime => TreeState::new(Ebar, k, l),
        O => TreeState::new(D, k, 1),
    }
}

// The forward moves read backwards.

fn s0_inv(x: TreeState) -> TreeState {
    let TreeState { family, k, l } = x;
    match family {
        A if k == 0 => TreeState::new(Eprime, 1, 0),
        A => TreeState::new(Q, k - 1, 0),
        D if k == 0 => TreeState::new(Eprime, 1, l),
        D => TreeState::new(Q, k - 1, l),
        E => TreeState::new(Eprime, k + 1, l),
        Dbar if l == 1 => TreeState::o(k),
        Dbar => TreeState::new(Qbar, k, l - 2),
        Ebar => TreeState::new(Ebarprime, k, l),
        Q if l == 0 => TreeState::a(k),
        Q => TreeState::new(D, k, l),
        Eprime => TreeState::new(E, k, l),
        Qbar => TreeState::new(Dbar, k, l + 2),
        O => TreeState::new(Dbar, k, 1),
        Ebarprime => TreeState::new(Ebar, k, l),
    }
}

fn sinf_inv(x: TreeState) -> TreeState {
    let TreeState { family, k, l } = x;
    match family {
        A => TreeState::new(Qbar, k, 0),
        D if l == 1 => TreeState::o(k),
        D => TreeState::new(Q, k, l - 2),
        E => TreeState::new(Eprime, k, l),
        Dbar => TreeState::new(Qbar, k, l),
        Ebar => TreeState::new(Ebarprime, k, l),
        Ebarprime if k == 1 && l == 0 => TreeState::a(0),
        Ebarprime if k == 1 => TreeState::new(Dbar, 0, l),
        Ebarprime => TreeState::new(Ebar, k - 1, l),
        Qbar if l == 0 => TreeState::a(k + 1),
        Qbar => TreeState::new(Dbar, k + 1, l),
        O => TreeState::new(D, k, 1),
        Q => TreeState::new(D, k, l + 2),
        Eprime => TreeState::new(E, k, l),
    }
}

/// Applies one move. The input must be a valid state.
pub fn act(mv: SMove, state: TreeState) -> Result<TreeState> {
    state.validate().map_err(Error::InvalidInput)?;
    let image = match mv {
        SMove::S0 => s0(state),
        SMove::S0Inv => s0_inv(state),
        SMove::Sinf => sinf(state),
        SMove::SinfInv => sinf_inv(state),
    };
    if image.is_valid() {
        Ok(image)
    } else {
        Err(Error::OutOfTable(format!("{mv} on {state}")))
    }
}

/// Applies the moves left to right.
pub fn act_word(word: &[SMove], state: TreeState) -> Result<TreeState> {
    word.iter().try_fold(state, |x, mv| act(*mv, x))
}

pub fn q_move(q: QMove, state: TreeState) -> Result<TreeState> {
    act_word(&q.word(), state)
}
