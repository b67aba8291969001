//! Classical periodic orbits of the step well as necklaces over `{L, R}`.
//!
//! `L` is one round trip across the left half, `R` one across the right
//! half. Between consecutive letters the orbit meets the step at `x = 0`:
//! equal neighbours mean it was reflected there, unequal ones that it was
//! transmitted. Every letter includes one hard-wall bounce, and reflections
//! off the step from the right (`RR`) flip the sign of the wave as well.

use std::fmt;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::model::{reflection_unchecked, transmission_sq_unchecked, ReducedAction};

/// Default longest necklace produced by [`enumerate_necklaces`].
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

pub const CENSUS_HEADER: &str = "word,n_L,n_R,sigma,tau,chi,fundamental";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    L,
    R,
}

impl Symbol {
    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'L' => Ok(Self::L),
            'R' => Ok(Self::R),
            other => Err(Error::InvalidSymbol(other)),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Self::L => 'L',
            Self::R => 'R',
        }
    }
}

/// A periodic orbit: canonical word plus its bookkeeping counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrbitNecklace {
    word: Vec<Symbol>,
    pub n_l: u32,
    pub n_r: u32,
    /// Reflections at the step.
    pub sigma: u32,
    /// Transmissions through the step.
    pub tau: u32,
    /// Sign-changing bounces: hard walls plus reflections from the right.
    pub chi: u32,
    /// How many times the primitive orbit is traversed (1 = fundamental).
    pub repetitions: u32,
}

impl OrbitNecklace {
    pub fn word(&self) -> &[Symbol] {
        &self.word
    }

    pub fn word_string(&self) -> String {
        self.word.iter().map(|s| s.as_char()).collect()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_fundamental(&self) -> bool {
        self.repetitions == 1
    }

    /// The orbit traversed `nu` times.
    pub fn repeat(&self, nu: usize) -> Self {
        let word: Vec<Symbol> = self
            .word
            .iter()
            .copied()
            .cycle()
            .take(self.word.len() * nu)
            .collect();
        from_symbols(&word)
    }

    pub fn census_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.word_string(),
            self.n_l,
            self.n_r,
            self.sigma,
            self.tau,
            self.chi,
            self.is_fundamental()
        )
    }
}

impl fmt::Display for OrbitNecklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word_string())
    }
}

/// Parses and classifies a word such as `"RLR"`.
pub fn classify(word: &str) -> Result<OrbitNecklace> {
    let symbols = word
        .chars()
        .map(Symbol::from_char)
        .collect::<Result<Vec<_>>>()?;
    classify_symbols(&symbols)
}

pub fn classify_symbols(word: &[Symbol]) -> Result<OrbitNecklace> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(from_symbols(word))
}

fn from_symbols(word: &[Symbol]) -> OrbitNecklace {
    let word = minimal_rotation(word);
    let len = word.len();
    let mut n_l = 0;
    let mut sigma = 0;
    let mut right_reflections = 0;
    for (i, &sym) in word.iter().enumerate() {
        let next = word[(i + 1) % len];
        if sym == Symbol::L {
            n_l += 1;
        }
        if sym == next {
            sigma += 1;
            if sym == Symbol::R {
                right_reflections += 1;
            }
        }
    }
    let len = len as u32;
    let repetitions = len / smallest_period(&word) as u32;
    OrbitNecklace {
        word,
        n_l,
        n_r: len - n_l,
        sigma,
        tau: len - sigma,
        chi: len + right_reflections,
        repetitions,
    }
}

/// Lexicographically least rotation, with `L < R`.
fn minimal_rotation(word: &[Symbol]) -> Vec<Symbol> {
    let len = word.len();
    let rotation = |k: usize| word[k..].iter().chain(&word[..k]);
    let best = (0..len)
        .min_by(|&a, &b| rotation(a).cmp(rotation(b)))
        .unwrap_or(0);
    rotation(best).copied().collect()
}

fn smallest_period(word: &[Symbol]) -> usize {
    let len = word.len();
    (1..=len)
        .filter(|p| len.is_multiple_of(*p))
        .find(|&p| (0..len).all(|i| word[i] == word[(i + p) % len]))
        .unwrap_or(len)
}

/// All necklaces up to `max_len`, ordered by length and then lexicographically.
pub fn enumerate_necklaces(max_len: usize, fundamental_only: bool) -> Result<Vec<OrbitNecklace>> {
    enumerate_necklaces_with_cap(max_len, fundamental_only, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_necklaces_with_cap(
    max_len: usize,
    fundamental_only: bool,
    cap: usize,
) -> Result<Vec<OrbitNecklace>> {
    if max_len == 0 {
        return Err(Error::InvalidParameter {
            name: "max_len",
            value: 0.0,
            reason: "must be at least one",
        });
    }
    if max_len > cap {
        return Err(Error::EnumerationCap { len: max_len, cap });
    }
    let mut out = Vec::new();
    for len in 1..=max_len {
        necklaces_of_length(len, fundamental_only, |word| out.push(from_symbols(word)));
    }
    Ok(out)
}

/// Fredricksen–Kessler–Maiorana generation of binary necklaces of length
/// `n` in lexicographic order.
fn necklaces_of_length<F: FnMut(&[Symbol])>(n: usize, lyndon_only: bool, mut emit: F) {
    let to_word = |a: &[u8]| -> Vec<Symbol> {
        a[1..]
            .iter()
            .map(|&d| if d == 0 { Symbol::L } else { Symbol::R })
            .collect()
    };
    let mut a = vec![0u8; n + 1];
    let mut period = 1;
    loop {
        if n.is_multiple_of(period) && (!lyndon_only || period == n) {
            emit(&to_word(&a));
        }
        let mut i = n;
        while i > 0 && a[i] == 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        a[i] += 1;
        for j in i + 1..=n {
            a[j] = a[j - i];
        }
        period = i;
    }
}

pub fn write_census<W: Write>(mut out: W, necklaces: &[OrbitNecklace]) -> io::Result<()> {
    writeln!(out, "{CENSUS_HEADER}")?;
    for necklace in necklaces {
        writeln!(out, "{}", necklace.census_line())?;
    }
    Ok(())
}

/// Reduced action of the orbit at base action `s`:
/// `(n_L + n_R) s + 2α (n_L - n_R)/s`.
pub fn reduced_action_of_orbit(alpha: f64, orbit: &OrbitNecklace, s: ReducedAction) -> f64 {
    orbit_action_unchecked(alpha, orbit, s.get())
}

#[inline]
pub(crate) fn orbit_action_unchecked(alpha: f64, orbit: &OrbitNecklace, s: f64) -> f64 {
    let total = f64::from(orbit.n_l + orbit.n_r);
    let imbalance = f64::from(orbit.n_l) - f64::from(orbit.n_r);
    total * s + 2.0 * alpha * imbalance / s
}

/// Weight `(-1)^χ r^σ t^τ` of the orbit at base action `s`.
pub fn amplitude(alpha: f64, orbit: &OrbitNecklace, s: ReducedAction) -> Result<f64> {
    let sv = s.get();
    if sv * sv <= 2.0 * alpha {
        return Err(Error::Domain {
            what: "amplitude",
            value: sv,
            reason: "reduced action must exceed sqrt(2 alpha)",
        });
    }
    Ok(amplitude_unchecked(alpha, orbit, sv))
}

#[inline]
pub(crate) fn amplitude_unchecked(alpha: f64, orbit: &OrbitNecklace, s: f64) -> f64 {
    let sign = if orbit.chi.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let r = reflection_unchecked(alpha, s);
    let t_sq = transmission_sq_unchecked(alpha, s);
    sign * r.powi(orbit.sigma as i32) * t_sq.powi((orbit.tau / 2) as i32)
}

/// The two groups of orbits with exactly one reflection at the step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilySide {
    /// `(LR)^(j-1) L`: the reflection happens from the left.
    LeftGroup,
    /// `(RL)^(j-1) R`: the reflection happens from the right.
    RightGroup,
}

/// The `j`-th (1-based) single-reflection necklace of a group.
pub fn single_reflection_family(side: FamilySide, j: usize) -> Result<OrbitNecklace> {
    if j == 0 {
        return Err(Error::InvalidParameter {
            name: "j",
            value: 0.0,
            reason: "family index is 1-based",
        });
    }
    let (first, second) = match side {
        FamilySide::LeftGroup => (Symbol::L, Symbol::R),
        FamilySide::RightGroup => (Symbol::R, Symbol::L),
    };
    let mut word = Vec::with_capacity(2 * j - 1);
    for _ in 1..j {
        word.push(first);
        word.push(second);
    }
    word.push(first);
    Ok(from_symbols(&word))
}
