use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::{Field, FieldDescriptor};
use super::monomial::MonomialOrder;
use crate::error::{Error, Result};

/// Variables and term order of a polynomial ring; the coefficient field is
/// carried by the type parameter of the polynomials living in it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
    order: MonomialOrder,
}

impl Ring {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = S>, order: MonomialOrder) -> Arc<Ring> {
        Arc::new(Ring { vars: vars.into_iter().map(Into::into).collect(), order })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn with_order(&self, order: MonomialOrder) -> Arc<Ring> {
        Arc::new(Ring { vars: self.vars.clone(), order })
    }

    /// A fresh variable name not clashing with the existing ones.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.var_index(&name).is_some() {
            name.insert(0, '_');
        }
        name
    }

    pub fn descriptor<F: Field>(&self) -> RingDescriptor {
        RingDescriptor { field: F::descriptor(), vars: self.vars.clone(), order: self.order }
    }
}

pub(crate) fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub(crate) fn check_same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> Result<()> {
    if same_ring(a, b) {
        Ok(())
    } else {
        Err(Error::RingMismatch)
    }
}

/// Serialized form `{"field": "Q" | {"Fp": p}, "vars": [...], "order": "grevlex" | ...}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub field: FieldDescriptor,
    pub vars: Vec<String>,
    #[serde(default = "default_order")]
    pub order: MonomialOrder,
}

fn default_order() -> MonomialOrder {
    MonomialOrder::Grevlex
}

impl RingDescriptor {
    pub fn ring(&self) -> Result<Arc<Ring>> {
        for (i, v) in self.vars.iter().enumerate() {
            let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::Input(format!("invalid variable name {v:?}")));
            }
            if self.vars[..i].contains(v) {
                return Err(Error::Input(format!("duplicate variable {v:?}")));
            }
        }
        Ok(Ring::new(self.vars.clone(), self.order))
    }
}
