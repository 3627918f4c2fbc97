use std::collections::HashMap;
use std::fmt;

use crate::algebra::{fmt_set, VarSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    Symmetry,
    Decomposition,
    WeakUnion,
    Contraction,
    Intersection,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Symmetry => "symmetry",
            Axiom::Decomposition => "decomposition",
            Axiom::WeakUnion => "weak-union",
            Axiom::Contraction => "contraction",
            Axiom::Intersection => "intersection",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub r: VarSet,
    pub s: VarSet,
    pub v: VarSet,
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊥ {} | {}", fmt_set(&self.r), fmt_set(&self.s), fmt_set(&self.v))
    }
}

/// Premises that hold while the conclusion does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub premises: Vec<Triple>,
    pub conclusion: Triple,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let premises: Vec<String> = self.premises.iter().map(ToString::to_string).collect();
        write!(f, "{}: {} but not {}", self.axiom, premises.join(" and "), self.conclusion)
    }
}

#[derive(Debug, Clone, Default)]
pub struct SemigraphoidReport {
    /// Distinct triples the criterion was asked about.
    pub queries: usize,
    pub violations: Vec<Violation>,
}

impl SemigraphoidReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

type Mask = u32;

struct Memo<'a, F> {
    criterion: F,
    names: &'a [String],
    cache: HashMap<(Mask, Mask, Mask), bool>,
}

impl<F> Memo<'_, F>
where
    F: FnMut(&VarSet, &VarSet, &VarSet) -> Result<bool>,
{
    fn set(&self, mask: Mask) -> VarSet {
        self.names
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, n)| n.clone())
            .collect()
    }

    fn triple(&self, r: Mask, s: Mask, v: Mask) -> Triple {
        Triple { r: self.set(r), s: self.set(s), v: self.set(v) }
    }

    fn ask(&mut self, r: Mask, s: Mask, v: Mask) -> Result<bool> {
        if let Some(&b) = self.cache.get(&(r, s, v)) {
            return Ok(b);
        }
        let (rs, ss, vs) = (self.set(r), self.set(s), self.set(v));
        let b = (self.criterion)(&rs, &ss, &vs)?;
        self.cache.insert((r, s, v), b);
        Ok(b)
    }
}

/// Splits a code in base `k` into one mask per digit value `1..k`.
fn split(mut code: usize, n: usize, k: usize) -> Vec<Mask> {
    let mut masks = vec![0; k];
    for i in 0..n {
        masks[code % k] |= 1 << i;
        code /= k;
    }
    masks
}

/// Exhaustively checks symmetry, decomposition, weak union and contraction
/// (and intersection when asked) for `criterion` over every disjoint
/// triple of `universe`. The criterion is queried at most once per triple.
pub fn check_semigraphoid<F>(criterion: F, universe: &[String], intersection: bool) -> Result<SemigraphoidReport>
where
    F: FnMut(&VarSet, &VarSet, &VarSet) -> Result<bool>,
{
    let n = universe.len();
    if n > 12 {
        return Err(Error::Domain(format!("universe of {n} variables is too large to enumerate")));
    }
    let mut memo = Memo { criterion, names: universe, cache: HashMap::new() };
    let mut violations = Vec::new();

    for code in 0..4usize.pow(n as u32) {
        let m = split(code, n, 4);
        let (r, s, v) = (m[1], m[2], m[3]);
        if r == 0 || s == 0 || !memo.ask(r, s, v)? {
            continue;
        }
        if !memo.ask(s, r, v)? {
            violations.push(Violation {
                axiom: Axiom::Symmetry,
                premises: vec![memo.triple(r, s, v)],
                conclusion: memo.triple(s, r, v),
            });
        }
        // proper non-empty sub-masks of s
        let mut sub = (s - 1) & s;
        while sub != 0 {
            let w = s & !sub;
            if !memo.ask(r, sub, v)? {
                violations.push(Violation {
                    axiom: Axiom::Decomposition,
                    premises: vec![memo.triple(r, s, v)],
                    conclusion: memo.triple(r, sub, v),
                });
            }
            if !memo.ask(r, sub, v | w)? {
                violations.push(Violation {
                    axiom: Axiom::WeakUnion,
                    premises: vec![memo.triple(r, s, v)],
                    conclusion: memo.triple(r, sub, v | w),
                });
            }
            sub = (sub - 1) & s;
        }
    }

    for code in 0..5usize.pow(n as u32) {
        let m = split(code, n, 5);
        let (r, s, w, v) = (m[1], m[2], m[3], m[4]);
        if r == 0 || s == 0 || w == 0 {
            continue;
        }
        if memo.ask(r, s, v)? && memo.ask(r, w, v | s)? && !memo.ask(r, s | w, v)? {
            violations.push(Violation {
                axiom: Axiom::Contraction,
                premises: vec![memo.triple(r, s, v), memo.triple(r, w, v | s)],
                conclusion: memo.triple(r, s | w, v),
            });
        }
        if intersection && memo.ask(r, s, v | w)? && memo.ask(r, w, v | s)? && !memo.ask(r, s | w, v)? {
            violations.push(Violation {
                axiom: Axiom::Intersection,
                premises: vec![memo.triple(r, s, v | w), memo.triple(r, w, v | s)],
                conclusion: memo.triple(r, s | w, v),
            });
        }
    }

    Ok(SemigraphoidReport { queries: memo.cache.len(), violations })
}
