use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A set of variable names. Ordered so that everything derived from it
/// (reports, traces, enumeration) is deterministic.
pub type VarSet = BTreeSet<String>;

/// Characters reserved by the model-file format and by fused node names.
const RESERVED: &[char] = &[',', '{', '}', '=', '+', '#', '(', ')'];

pub(crate) fn validate_name(name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c)) {
        return Err(Error::InvalidName(name.to_string()));
    }
    Ok(())
}

/// A named variable with a finite frame of `frame_size` outcomes, labelled
/// `0..frame_size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    name: String,
    frame_size: usize,
}

impl Variable {
    pub fn new(name: impl Into<String>, frame_size: usize) -> Result<Self> {
        let name = name.into();
        validate_name(&name)?;
        if frame_size == 0 {
            return Err(Error::Domain(format!("variable {name} has an empty frame")));
        }
        Ok(Self { name, frame_size })
    }

    /// Shorthand for a two-outcome variable.
    pub fn binary(name: impl Into<String>) -> Result<Self> {
        Self::new(name, 2)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn frame_size(&self) -> usize {
        self.frame_size
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// An ordered list of distinct variables. The order fixes the table layout
/// (row-major, last variable fastest); as a set, order is irrelevant and
/// [`Domain::set_eq`] compares membership only.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Domain {
    vars: Vec<Variable>,
}

impl Domain {
    pub fn new(vars: Vec<Variable>) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].iter().any(|u| u.name == v.name) {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
        }
        Ok(Self { vars })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// Number of configurations of the product frame (1 for the empty domain).
    pub fn size(&self) -> usize {
        self.vars.iter().map(|v| v.frame_size).product()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.vars.iter().map(|v| v.name.as_str())
    }

    pub fn name_set(&self) -> VarSet {
        self.names().map(str::to_string).collect()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.position(name).is_some()
    }

    pub fn get(&self, name: &str) -> Option<&Variable> {
        self.vars.iter().find(|v| v.name == name)
    }

    pub fn is_subset(&self, other: &Domain) -> bool {
        self.names().all(|n| other.contains(n))
    }

    pub fn set_eq(&self, other: &Domain) -> bool {
        self.len() == other.len() && self.is_subset(other)
    }

    /// Union keeping `self`'s order followed by the new variables of `other`.
    pub fn union(&self, other: &Domain) -> Result<Domain> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            match self.get(&v.name) {
                Some(u) if u.frame_size != v.frame_size => {
                    return Err(Error::Domain(format!(
                        "variable {} has frame size {} and {}",
                        v.name, u.frame_size, v.frame_size
                    )))
                }
                Some(_) => {}
                None => vars.push(v.clone()),
            }
        }
        Ok(Domain { vars })
    }

    /// The variables of `self` whose names are in `keep`, in `self`'s order.
    pub fn restrict<S: AsRef<str>>(&self, keep: impl IntoIterator<Item = S>) -> Domain {
        let keep: Vec<S> = keep.into_iter().collect();
        let vars = self
            .vars
            .iter()
            .filter(|v| keep.iter().any(|k| k.as_ref() == v.name))
            .cloned()
            .collect();
        Domain { vars }
    }

    pub fn without(&self, name: &str) -> Domain {
        Domain {
            vars: self.vars.iter().filter(|v| v.name != name).cloned().collect(),
        }
    }

    /// Builds a domain from names, looking each one up in `self`; the result
    /// follows the order of `names`.
    pub fn select<S: AsRef<str>>(&self, names: impl IntoIterator<Item = S>) -> Result<Domain> {
        let vars = names
            .into_iter()
            .map(|n| {
                self.get(n.as_ref())
                    .cloned()
                    .ok_or_else(|| Error::UnknownVariable(n.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Domain::new(vars)
    }

    /// Row-major strides, last variable fastest.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.vars.len()];
        for i in (0..self.vars.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.vars[i + 1].frame_size;
        }
        strides
    }

    /// For every configuration of `self` (in table order), the index of its
    /// restriction in a table over `sub`. `sub` must be a subset of `self`.
    pub(crate) fn projection(&self, sub: &Domain) -> Vec<usize> {
        let sub_strides = sub.strides();
        let strides: Vec<usize> = self
            .vars
            .iter()
            .map(|v| sub.position(&v.name).map_or(0, |p| sub_strides[p]))
            .collect();
        let sizes: Vec<usize> = self.vars.iter().map(|v| v.frame_size).collect();
        let total = self.size();
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0usize; sizes.len()];
        let mut idx = 0usize;
        for _ in 0..total {
            out.push(idx);
            for k in (0..sizes.len()).rev() {
                digits[k] += 1;
                idx += strides[k];
                if digits[k] < sizes[k] {
                    break;
                }
                idx -= strides[k] * sizes[k];
                digits[k] = 0;
            }
        }
        out
    }

    /// Decodes a flat table index into per-variable outcomes.
    pub fn config(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.vars.len()];
        for (i, v) in self.vars.iter().enumerate().rev() {
            out[i] = index % v.frame_size;
            index /= v.frame_size;
        }
        out
    }

    /// Encodes per-variable outcomes into a flat table index.
    pub fn index(&self, config: &[usize]) -> usize {
        self.vars
            .iter()
            .zip(config)
            .fold(0, |acc, (v, &x)| acc * v.frame_size + x)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.vars.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(&v.name)?;
        }
        f.write_str("}")
    }
}

/// Formats a name set as `{A,B}`.
pub fn fmt_set<'a>(names: impl IntoIterator<Item = &'a String>) -> String {
    let names: Vec<&str> = names.into_iter().map(String::as_str).collect();
    format!("{{{}}}", names.join(","))
}
