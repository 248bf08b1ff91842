//! Polynomial rings: an ordered list of named variables over a ground field.
//!
//! Rings are immutable and cheaply cloneable (`Arc` inside). Equality is by
//! value — two rings agree when they have the same field and the same
//! variable names in the same order — so polynomials can check ring
//! compatibility without tracking object identity.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;

#[derive(Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
struct RingInner {
    field: FieldSpec,
    names: Vec<String>,
}

/// A polynomial ring `k[x_1, ..., x_n]` with named, ordered variables.
#[derive(Debug, Clone)]
pub struct PolyRing {
    inner: Arc<RingInner>,
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner
    }
}

impl Eq for PolyRing {}

impl std::hash::Hash for PolyRing {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.inner.hash(state);
    }
}

impl PolyRing {
    /// A ring over `field` with the given variable names. Names must be
    /// nonempty and pairwise distinct.
    pub fn new<S: Into<String>>(field: FieldSpec, names: Vec<S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::InvariantViolation("empty variable name".into()));
            }
            if names[..i].contains(n) {
                return Err(Error::InvariantViolation(format!(
                    "duplicate variable name {n}"
                )));
            }
        }
        Ok(PolyRing {
            inner: Arc::new(RingInner { field, names }),
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.inner.field
    }

    pub fn num_vars(&self) -> usize {
        self.inner.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.inner.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.inner.names[index]
    }

    /// Index of a variable by exact name.
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.inner.names.iter().position(|n| n == name)
    }

    /// The ring obtained by priming the variables at `indices`: each listed
    /// name gets a `'` appended, everything else is unchanged. This is how a
    /// blow-up chart renames the substituted variables. If the input already
    /// contains primed names, extra primes are appended until all names are
    /// distinct again (deterministically).
    pub fn primed_at(&self, indices: &[usize]) -> Result<PolyRing> {
        let mut names = self.inner.names.clone();
        for &i in indices {
            if i >= names.len() {
                return Err(Error::VariableNotInRing {
                    name: format!("#{i}"),
                });
            }
            names[i].push('\'');
        }
        for &i in indices {
            while names.iter().enumerate().any(|(k, n)| k != i && *n == names[i]) {
                names[i].push('\'');
            }
        }
        PolyRing::new(self.inner.field, names)
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = match self.inner.field {
            FieldSpec::Rational => "Q".to_string(),
            FieldSpec::Prime(p) => format!("F{p}"),
        };
        write!(f, "{field}[{}]", self.inner.names.join(","))
    }
}

impl Serialize for PolyRing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.inner.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyRing {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let inner = RingInner::deserialize(d)?;
        PolyRing::new(inner.field, inner.names).map_err(serde::de::Error::custom)
    }
}
