//! Matrix literals.
//!
//! ```text
//! identity | cesaro | difference | euler:<r> | taylor:<r> | riesz:<sequence>
//! rule:<expr>     entry a_nk = expr for every k (infinite rows)
//! lower:<expr>    a_nk = expr for k <= n, zero above the diagonal
//! csv:<path>      explicit leading block, zero elsewhere unless a tail is given
//! ```
//!
//! A tail (`--tail rule:<expr>` or `--tail lower:<expr>`) fills the entries
//! outside the CSV block.

use std::fmt;
use std::sync::{Arc, Mutex};

use sumkit_core::operators::{classical_matrix, ClassicalKind, RowExtent, Structure, TriangleOperator};
use sumkit_core::{Exact, Scalar};

use crate::error::{usage, CliError};
use crate::expr::Expr;
use crate::literal::{rational, SeqSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classical {
    Identity,
    Cesaro,
    Difference,
    Euler(Exact),
    Taylor(Exact),
    Riesz(SeqSpec),
}

impl Classical {
    pub fn parse(s: &str) -> Result<Classical, CliError> {
        let s = s.trim();
        Ok(match s {
            "identity" => Classical::Identity,
            "cesaro" => Classical::Cesaro,
            "difference" => Classical::Difference,
            _ => {
                if let Some(r) = s.strip_prefix("euler:") {
                    Classical::Euler(rational(r)?)
                } else if let Some(r) = s.strip_prefix("taylor:") {
                    Classical::Taylor(rational(r)?)
                } else if let Some(t) = s.strip_prefix("riesz:") {
                    Classical::Riesz(SeqSpec::parse_weight(t)?)
                } else {
                    return Err(usage(format!("unknown matrix {s:?}")));
                }
            }
        })
    }

    pub fn kind<T: Scalar>(&self) -> ClassicalKind<T> {
        match self {
            Classical::Identity => ClassicalKind::Identity,
            Classical::Cesaro => ClassicalKind::Cesaro,
            Classical::Difference => ClassicalKind::Difference,
            Classical::Euler(r) => ClassicalKind::Euler(T::from_exact(r)),
            Classical::Taylor(r) => ClassicalKind::Taylor(T::from_exact(r)),
            Classical::Riesz(t) => ClassicalKind::Riesz(t.sequence()),
        }
    }
}

impl fmt::Display for Classical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classical::Identity => f.write_str("identity"),
            Classical::Cesaro => f.write_str("cesaro"),
            Classical::Difference => f.write_str("difference"),
            Classical::Euler(r) => write!(f, "euler:{r}"),
            Classical::Taylor(r) => write!(f, "taylor:{r}"),
            Classical::Riesz(t) => write!(f, "riesz:{t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    Rule(Expr),
    Lower(Expr),
}

impl Tail {
    pub fn parse(s: &str) -> Result<Tail, CliError> {
        let s = s.trim();
        if let Some(e) = s.strip_prefix("rule:") {
            Ok(Tail::Rule(Expr::parse(e)?))
        } else if let Some(e) = s.strip_prefix("lower:") {
            Ok(Tail::Lower(Expr::parse(e)?))
        } else {
            Err(usage(format!("expected rule:<expr> or lower:<expr>, got {s:?}")))
        }
    }

    fn eval(&self, n: usize, k: usize) -> Result<Exact, String> {
        match self {
            Tail::Rule(e) => e.eval(n, k),
            Tail::Lower(e) if k <= n => e.eval(n, k),
            Tail::Lower(_) => Ok(Exact::from_int(0)),
        }
    }
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tail::Rule(e) => write!(f, "rule:{e}"),
            Tail::Lower(e) => write!(f, "lower:{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixSpec {
    Classical(Classical),
    Expr(Tail),
    Csv { path: String, block: Vec<Vec<Exact>>, tail: Option<Tail> },
}

/// First evaluation failure inside an entry rule. Entry closures cannot
/// return errors, so they yield zero and record the fault here; callers check
/// it once the computation is done.
#[derive(Debug, Clone, Default)]
pub struct Faults(Arc<Mutex<Option<String>>>);

impl Faults {
    fn record(&self, msg: String) {
        let mut slot = self.0.lock().expect("fault slot poisoned");
        if slot.is_none() {
            *slot = Some(msg);
        }
    }

    pub fn check(&self) -> Result<(), CliError> {
        match self.0.lock().expect("fault slot poisoned").clone() {
            Some(msg) => Err(CliError::Expression(msg)),
            None => Ok(()),
        }
    }
}

fn read_block(path: &str) -> Result<Vec<Vec<Exact>>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|source| CliError::Csv { path: path.into(), source })?;
    let mut block = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|source| CliError::Csv { path: path.into(), source })?;
        let row = record
            .iter()
            .enumerate()
            .map(|(j, cell)| {
                rational(cell).map_err(|_| usage(format!("{path}: bad entry {cell:?} at row {}, column {}", i + 1, j + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        block.push(row);
    }
    if block.is_empty() {
        return Err(usage(format!("{path}: no rows")));
    }
    Ok(block)
}

impl MatrixSpec {
    pub fn parse(s: &str, tail: Option<&str>) -> Result<MatrixSpec, CliError> {
        let s = s.trim();
        let tail = tail.map(Tail::parse).transpose()?;
        if let Some(path) = s.strip_prefix("csv:") {
            return Ok(MatrixSpec::Csv { path: path.into(), block: read_block(path)?, tail });
        }
        if tail.is_some() {
            return Err(usage("--tail only applies to csv:<path> matrices"));
        }
        if s.starts_with("rule:") || s.starts_with("lower:") {
            return Ok(MatrixSpec::Expr(Tail::parse(s)?));
        }
        Ok(MatrixSpec::Classical(Classical::parse(s)?))
    }

    pub fn canonical(&self) -> String {
        match self {
            MatrixSpec::Classical(c) => c.to_string(),
            MatrixSpec::Expr(t) => t.to_string(),
            MatrixSpec::Csv { path, tail: None, .. } => format!("csv:{path}"),
            MatrixSpec::Csv { path, tail: Some(t), .. } => format!("csv:{path} tail {t}"),
        }
    }

    pub fn build<T: Scalar>(&self, faults: &Faults) -> Result<TriangleOperator<T>, CliError> {
        let entry_rule = |tail: Tail, block: Vec<Vec<Exact>>| {
            let faults = faults.clone();
            move |n: usize, k: usize| {
                if let Some(v) = block.get(n - 1).and_then(|r| r.get(k - 1)) {
                    return T::from_exact(v);
                }
                match tail.eval(n, k) {
                    Ok(v) => T::from_exact(&v),
                    Err(msg) => {
                        faults.record(msg);
                        T::zero()
                    }
                }
            }
        };
        Ok(match self {
            MatrixSpec::Classical(c) => classical_matrix(&c.kind::<T>())?,
            MatrixSpec::Expr(t @ Tail::Rule(_)) => {
                TriangleOperator::from_entries(Structure::RowEvaluable(RowExtent::Infinite), entry_rule(t.clone(), Vec::new()))
            }
            MatrixSpec::Expr(t @ Tail::Lower(_)) => {
                TriangleOperator::from_entries(Structure::RowEvaluable(RowExtent::Lower), entry_rule(t.clone(), Vec::new()))
            }
            MatrixSpec::Csv { block, tail: None, .. } => {
                TriangleOperator::from_dense(block.iter().map(|r| r.iter().map(T::from_exact).collect()).collect())
            }
            MatrixSpec::Csv { block, tail: Some(t), .. } => {
                let structure = match t {
                    Tail::Rule(_) => Structure::RowEvaluable(RowExtent::Infinite),
                    Tail::Lower(_) => {
                        let lens: Vec<usize> = block.iter().map(Vec::len).collect();
                        Structure::RowEvaluable(RowExtent::Finite(Arc::new(move |n| {
                            lens.get(n - 1).copied().unwrap_or(0).max(n)
                        })))
                    }
                };
                TriangleOperator::from_entries(structure, entry_rule(t.clone(), block.clone()))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_build() {
        let f = Faults::default();
        let c = MatrixSpec::parse("cesaro", None).unwrap().build::<Exact>(&f).unwrap();
        assert_eq!(c.entry(4, 2), Exact::from_frac(1, 4));
        let e = MatrixSpec::parse("euler:1/2", None).unwrap();
        assert_eq!(e.canonical(), "euler:1/2");
        assert_eq!(e.build::<Exact>(&f).unwrap().entry(2, 1), Exact::from_frac(1, 2));
        let r = MatrixSpec::parse("riesz:1,2;tail:ones", None);
        assert!(r.is_err(), "bare list tail is zeros, not a valid weight");
        let r = MatrixSpec::parse("riesz:terms:2;tail:ones", None).unwrap();
        assert_eq!(r.canonical(), "riesz:terms:2;tail:ones");
        assert_eq!(r.build::<Exact>(&f).unwrap().entry(2, 1), Exact::from_frac(2, 3));
        assert!(MatrixSpec::parse("euler:2", None).unwrap().build::<Exact>(&f).is_err());
    }

    #[test]
    fn expression_matrices() {
        let f = Faults::default();
        let a = MatrixSpec::parse("lower:n", None).unwrap().build::<Exact>(&f).unwrap();
        assert_eq!(a.row(3).as_slice(), &[Exact::from_int(3), Exact::from_int(3), Exact::from_int(3)]);
        assert_eq!(a.entry(2, 3), Exact::from_int(0));
        let b = MatrixSpec::parse("rule: 2^(-n-k)", None).unwrap();
        assert_eq!(b.canonical(), "rule:2^(-n-k)");
        assert_eq!(b.build::<f64>(&f).unwrap().entry(1, 1), 0.25);
        f.check().unwrap();
    }

    #[test]
    fn faults_surface_after_evaluation() {
        let f = Faults::default();
        let a = MatrixSpec::parse("lower:1/(n-k)", None).unwrap().build::<Exact>(&f).unwrap();
        f.check().unwrap();
        assert_eq!(a.entry(2, 1), Exact::from_int(1));
        assert_eq!(a.entry(2, 2), Exact::from_int(0));
        assert!(f.check().unwrap_err().to_string().contains("division by zero at (n,k) = (2,2)"));
    }

    #[test]
    fn csv_blocks() {
        let dir = std::env::temp_dir().join(format!("sumkit-matrix-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("b.csv");
        std::fs::write(&path, "# leading block\n1, 1/2\n-3,0.25,7\n").unwrap();
        let p = path.to_str().unwrap();
        let f = Faults::default();
        let plain = MatrixSpec::parse(&format!("csv:{p}"), None).unwrap().build::<Exact>(&f).unwrap();
        assert_eq!(plain.row(2).as_slice(), &[Exact::from_int(-3), Exact::from_frac(1, 4), Exact::from_int(7)]);
        assert!(plain.try_row(3).is_err());
        let tailed = MatrixSpec::parse(&format!("csv:{p}"), Some("lower:1")).unwrap().build::<Exact>(&f).unwrap();
        assert_eq!(tailed.row(1).as_slice(), &[Exact::from_int(1), Exact::from_frac(1, 2)]);
        assert_eq!(tailed.row(3).as_slice(), vec![Exact::from_int(1); 3].as_slice());
        std::fs::write(&path, "1,x\n").unwrap();
        let msg = MatrixSpec::parse(&format!("csv:{p}"), None).unwrap_err().to_string();
        assert!(msg.contains("\"x\"") && msg.contains("column 2"), "{msg}");
        assert!(MatrixSpec::parse("identity", Some("lower:1")).is_err());
        std::fs::remove_dir_all(&dir).ok();
    }
}
