//! Sequence and weight literals.
//!
//! ```text
//! spec   := preset | list | "terms:" list [";tail:" preset]
//! preset := ones | zeros | e<k> | harmonic | alternating
//!         | power:<int> | geometric:<rational> | const:<rational>
//! list   := rational ("," rational)*
//! ```
//!
//! A bare list is shorthand for `terms:<list>;tail:zeros`. Explicit terms
//! override the tail at their own indices, so `terms:5;tail:harmonic` is
//! `5, 1/2, 1/3, ...`. [`SeqSpec::canonical`] folds equivalent presets
//! together and drops trailing terms that agree with the tail.

use std::fmt;

use num::{One, Zero};
use sumkit_core::scalar::{parse_exact, terminating_decimal};
use sumkit_core::{Exact, LazySequence, Scalar};

use crate::error::{usage, CliError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preset {
    Zeros,
    Ones,
    Unit(usize),
    Harmonic,
    Alternating,
    Power(i64),
    Geometric(Exact),
    Const(Exact),
}

impl Preset {
    fn parse(tok: &str) -> Result<Preset, CliError> {
        let tok = tok.trim();
        let param = |prefix: &str| tok.strip_prefix(prefix).map(str::trim);
        let p = if let Some(v) = param("power:") {
            Preset::Power(v.parse().map_err(|_| usage(format!("bad integer exponent in {tok:?}")))?)
        } else if let Some(v) = param("geometric:") {
            Preset::Geometric(rational(v)?)
        } else if let Some(v) = param("const:") {
            Preset::Const(rational(v)?)
        } else if let Some(v) = tok.strip_prefix('e').filter(|v| !v.is_empty() && v.bytes().all(|b| b.is_ascii_digit())) {
            let k: usize = v.parse().map_err(|_| usage(format!("bad unit index in {tok:?}")))?;
            if k == 0 {
                return Err(usage("unit sequences start at e1"));
            }
            Preset::Unit(k)
        } else {
            match tok {
                "ones" => Preset::Ones,
                "zeros" => Preset::Zeros,
                "harmonic" => Preset::Harmonic,
                "alternating" => Preset::Alternating,
                _ => return Err(usage(format!("unknown sequence preset {tok:?}"))),
            }
        };
        Ok(p.normalized())
    }

    fn normalized(self) -> Preset {
        let one = Exact::one();
        match self {
            Preset::Power(0) => Preset::Ones,
            Preset::Power(-1) => Preset::Harmonic,
            Preset::Const(c) | Preset::Geometric(c) if c.is_zero() => Preset::Zeros,
            Preset::Const(c) | Preset::Geometric(c) if c == one => Preset::Ones,
            Preset::Geometric(c) if c == -one => Preset::Alternating,
            p => p,
        }
    }

    /// Term `k` exactly.
    pub fn term(&self, k: usize) -> Exact {
        match self {
            Preset::Zeros => Exact::zero(),
            Preset::Ones => Exact::one(),
            Preset::Unit(j) => if k == *j { Exact::one() } else { Exact::zero() },
            Preset::Harmonic => Exact::from_usize(k).recip(),
            Preset::Alternating => if k.is_multiple_of(2) { Exact::one() } else { -Exact::one() },
            Preset::Power(p) => Exact::from_usize(k).pow_int(*p),
            Preset::Geometric(r) => r.pow_int(k as i64),
            Preset::Const(c) => c.clone(),
        }
    }

    fn sequence<T: Scalar>(&self) -> LazySequence<T> {
        match self {
            Preset::Zeros => LazySequence::zeros(),
            Preset::Ones => LazySequence::ones(),
            Preset::Unit(k) => LazySequence::unit(*k),
            Preset::Harmonic => LazySequence::harmonic(),
            Preset::Alternating => LazySequence::alternating(),
            Preset::Power(p) => LazySequence::power(*p),
            Preset::Geometric(r) => LazySequence::geometric(T::from_exact(r)),
            Preset::Const(c) => LazySequence::constant(T::from_exact(c)),
        }
    }

    fn has_zero_term(&self) -> bool {
        matches!(self, Preset::Zeros | Preset::Unit(_))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Zeros => f.write_str("zeros"),
            Preset::Ones => f.write_str("ones"),
            Preset::Unit(k) => write!(f, "e{k}"),
            Preset::Harmonic => f.write_str("harmonic"),
            Preset::Alternating => f.write_str("alternating"),
            Preset::Power(p) => write!(f, "power:{p}"),
            Preset::Geometric(r) => write!(f, "geometric:{r}"),
            Preset::Const(c) => write!(f, "const:{c}"),
        }
    }
}

/// A parsed sequence literal: explicit leading terms over a preset tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqSpec {
    terms: Vec<Exact>,
    tail: Preset,
}

pub(crate) fn rational(tok: &str) -> Result<Exact, CliError> {
    parse_exact(tok).ok_or_else(|| usage(format!("bad rational {:?}", tok.trim())))
}

fn list(s: &str) -> Result<Vec<Exact>, CliError> {
    s.split(',').map(rational).collect()
}

impl SeqSpec {
    pub fn parse(s: &str) -> Result<SeqSpec, CliError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(usage("empty sequence literal"));
        }
        let spec = if let Some(rest) = s.strip_prefix("terms:") {
            let (terms, tail) = match rest.split_once(';') {
                Some((t, tail)) => {
                    let tail = tail
                        .trim()
                        .strip_prefix("tail:")
                        .ok_or_else(|| usage(format!("expected tail:<preset> after ';' in {s:?}")))?;
                    (t, Preset::parse(tail)?)
                }
                None => (rest, Preset::Zeros),
            };
            if matches!(tail, Preset::Unit(_)) {
                return Err(usage("e<k> cannot follow explicit terms; list the terms instead"));
            }
            SeqSpec { terms: list(terms)?, tail }
        } else if s.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+' || c == '.') {
            SeqSpec { terms: list(s)?, tail: Preset::Zeros }
        } else {
            SeqSpec { terms: Vec::new(), tail: Preset::parse(s)? }
        };
        Ok(spec.normalized())
    }

    /// As [`parse`](Self::parse), then rejects any literal with a zero term.
    pub fn parse_weight(s: &str) -> Result<SeqSpec, CliError> {
        let spec = SeqSpec::parse(s)?;
        if spec.tail.has_zero_term() {
            return Err(usage(format!("weight {s:?} has zero terms; weights must be nonzero")));
        }
        if let Some(i) = spec.terms.iter().position(Zero::is_zero) {
            return Err(usage(format!("weight {s:?} has a zero at index {}", i + 1)));
        }
        Ok(spec)
    }

    fn normalized(mut self) -> SeqSpec {
        while let Some(last) = self.terms.last() {
            if *last != self.tail.term(self.terms.len()) {
                break;
            }
            self.terms.pop();
        }
        if self.tail == Preset::Zeros {
            let nonzero: Vec<usize> = (0..self.terms.len()).filter(|&i| !self.terms[i].is_zero()).collect();
            if let [i] = nonzero[..] {
                if self.terms[i].is_one() {
                    return SeqSpec { terms: Vec::new(), tail: Preset::Unit(i + 1) };
                }
            }
        }
        self
    }

    pub fn canonical(&self) -> String {
        self.to_string()
    }

    /// Index past which only the tail speaks, when the tail is zero.
    pub fn support(&self) -> Option<usize> {
        match self.tail {
            Preset::Zeros => Some(self.terms.len()),
            Preset::Unit(k) => Some(k.max(self.terms.len())),
            _ => None,
        }
    }

    pub fn term(&self, k: usize) -> Exact {
        match self.terms.get(k - 1) {
            Some(v) => v.clone(),
            None => self.tail.term(k),
        }
    }

    pub fn sequence<T: Scalar>(&self) -> LazySequence<T> {
        if self.terms.is_empty() {
            return self.tail.sequence();
        }
        let head: Vec<T> = self.terms.iter().map(T::from_exact).collect();
        if self.tail == Preset::Zeros {
            return LazySequence::from_vec(head);
        }
        let tail = self.tail.sequence::<T>();
        LazySequence::from_fn(move |k| match head.get(k - 1) {
            Some(v) => v.clone(),
            None => tail.get(k),
        })
    }
}

impl fmt::Display for SeqSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "{}", self.tail);
        }
        let terms: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "terms:{};tail:{}", terms.join(","), self.tail)
    }
}

/// Exact decimal rendering for JSON: terminating expansions in full, otherwise
/// 17 significant digits.
pub fn decimal(v: &Exact) -> String {
    terminating_decimal(v).unwrap_or_else(|| format!("{:.16e}", Scalar::to_f64(v)))
}
