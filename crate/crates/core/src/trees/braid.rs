use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::moves::SMove;
use crate::{Error, Result};

/// Loops around the four critical values `i, 1, -i, -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    I,
    One,
    MinusI,
    MinusOne,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::I, Generator::One, Generator::MinusI, Generator::MinusOne];

    fn symbol(self) -> &'static str {
        match self {
            Generator::I => "g_i",
            Generator::One => "g_1",
            Generator::MinusI => "g_-i",
            Generator::MinusOne => "g_-1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: Generator,
    pub inverted: bool,
}

impl Letter {
    pub const fn new(generator: Generator, inverted: bool) -> Self {
        Self { generator, inverted }
    }

    pub fn inverse(self) -> Self {
        Self::new(self.generator, !self.inverted)
    }

    /// All eight letters.
    pub fn all() -> [Letter; 8] {
        let g = Generator::ALL;
        [
            Letter::new(g[0], false),
            Letter::new(g[0], true),
            Letter::new(g[1], false),
            Letter::new(g[1], true),
            Letter::new(g[2], false),
            Letter::new(g[2], true),
            Letter::new(g[3], false),
            Letter::new(g[3], true),
        ]
    }
}

/// A freely reduced word in the free group on the four loops.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeWord(Vec<Letter>);

fn push_reduced(out: &mut Vec<Letter>, x: Letter) {
    if out.last() == Some(&x.inverse()) {
        out.pop();
    } else {
        out.push(x);
    }
}

impl FreeWord {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    /// Freely reduces the letters.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out = Vec::new();
        for x in letters {
            push_reduced(&mut out, x);
        }
        Self(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|x| x.inverse()).collect())
    }
}

/// Conjugator `c` of a generator under a move: `g ↦ c⁻¹ g c`, or `g` is fixed.
fn substitution(mv: SMove, g: Generator) -> Option<Letter> {
    use Generator::*;
    match (mv, g) {
        (SMove::S0, I) => Some(Letter::new(One, false)),
        (SMove::S0, MinusI) => Some(Letter::new(MinusOne, false)),
        (SMove::S0Inv, I) => Some(Letter::new(One, true)),
        (SMove::S0Inv, MinusI) => Some(Letter::new(MinusOne, true)),
        (SMove::Sinf, One) => Some(Letter::new(MinusI, false)),
        (SMove::Sinf, MinusOne) => Some(Letter::new(I, false)),
        (SMove::SinfInv, One) => Some(Letter::new(MinusI, true)),
        (SMove::SinfInv, MinusOne) => Some(Letter::new(I, true)),
        _ => None,
    }
}

/// Writes the rewritten, freely reduced word into `out` (cleared first).
pub fn braid_rewrite_into(mv: SMove, word: &[Letter], out: &mut Vec<Letter>) {
    out.clear();
    for &x in word {
        match substitution(mv, x.generator) {
            Some(c) => {
                push_reduced(out, c.inverse());
                push_reduced(out, x);
                push_reduced(out, c);
            }
            None => push_reduced(out, x),
        }
    }
}

/// Substitutes every generator by its image under the move and reduces freely.
///
/// `s₀` sends `g_i ↦ g_1⁻¹ g_i g_1` and `g_-i ↦ g_-1⁻¹ g_-i g_-1`; `s∞` sends
/// `g_1 ↦ g_-i⁻¹ g_1 g_-i` and `g_-1 ↦ g_i⁻¹ g_-1 g_i`. The inverse moves conjugate the other way.
pub fn braid_rewrite(mv: SMove, word: &FreeWord) -> FreeWord {
    let mut out = Vec::with_capacity(3 * word.len());
    braid_rewrite_into(mv, &word.0, &mut out);
    FreeWord(out)
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|x| {
                if x.inverted {
                    format!("{}^-1", x.generator.symbol())
                } else {
                    x.generator.symbol().to_string()
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for FreeWord {
    type Err = Error;

    /// Whitespace-separated `g_i`, `g_1`, `g_-i`, `g_-1`, each optionally followed by `^-1`; `1` is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for token in s.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (name, inverted) = match token.strip_suffix("^-1") {
                Some(name) => (name, true),
                None => (token, false),
            };
            let generator = Generator::ALL
                .into_iter()
                .find(|g| g.symbol() == name)
                .ok_or_else(|| Error::InvalidInput(format!("unknown generator {token:?}")))?;
            letters.push(Letter::new(generator, inverted));
        }
        Ok(FreeWord::new(letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        s.parse().unwrap()
    }

    #[test]
    fn rewrite_examples() {
        assert_eq!(braid_rewrite(SMove::S0, &w("g_i")), w("g_1^-1 g_i g_1"));
        assert_eq!(braid_rewrite(SMove::Sinf, &w("g_-1")), w("g_i^-1 g_-1 g_i"));
        assert_eq!(braid_rewrite(SMove::S0, &w("g_1 g_-1")), w("g_1 g_-1"));
        assert_eq!(braid_rewrite(SMove::S0Inv, &w("g_-i^-1")), w("g_-1 g_-i^-1 g_-1^-1"));
    }

    #[test]
    fn free_reduction() {
        assert!(w("g_i g_1 g_1^-1 g_i^-1").is_empty());
        assert_eq!(w("g_i g_i g_-1").len(), 3);
        assert_eq!(w("g_i g_1^-1").to_string(), "g_i g_1^-1");
        assert_eq!(FreeWord::identity().to_string(), "1");
        assert!("g_2".parse::<FreeWord>().is_err());
    }

    #[test]
    fn rewrites_are_mutually_inverse() {
        let sample = w("g_i g_-1^-1 g_1 g_1 g_-i g_i^-1 g_-1");
        for (a, b) in [(SMove::S0, SMove::S0Inv), (SMove::Sinf, SMove::SinfInv)] {
            assert_eq!(braid_rewrite(b, &braid_rewrite(a, &sample)), sample);
            assert_eq!(braid_rewrite(a, &braid_rewrite(b, &sample)), sample);
        }
    }
}
