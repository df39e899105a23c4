//! Current symbols: a base class, an optional node, an hbar shift of the
//! argument and a form (the field itself, an operator-processed additive
//! current, or an exponential of one).

use std::fmt;

use num::{One, Zero};

use crate::opseries::OpSeries;
use crate::scalar::{fmt_q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Constant term 1; exchange kernels are central scalars.
    Grouplike,
    Additive,
    /// A current with exchange rules among its own kind (X, x, a, b, ...).
    Field,
}

/// How a symbol is built from its base class.
///
/// On a grouplike base `G`: `Add(op)` is `op(d) log G`, `Grp(op)` is
/// `exp(op(d) log G)`; `G` itself is `Grp(1)` and `G^{-1}` is `Grp(-1)`.
/// On an additive base `A`: `Add(op)` is `op(d) A` and `Grp(op)` is `exp(op(d) A)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Form {
    Field,
    Add(OpSeries),
    Grp(OpSeries),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Base {
    pub class: String,
    pub node: Option<usize>,
}

impl Base {
    pub fn new(class: &str, node: Option<usize>) -> Self {
        Base { class: class.to_string(), node }
    }
}

/// `form(base)(v + shift*hbar)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym {
    pub base: Base,
    pub shift: Q,
    pub form: Form,
}

impl Sym {
    pub fn field(class: &str, node: Option<usize>, shift: Q) -> Sym {
        Sym { base: Base::new(class, node), shift, form: Form::Field }
    }

    pub fn grp(class: &str, node: Option<usize>, shift: Q, op: OpSeries) -> Sym {
        Sym { base: Base::new(class, node), shift, form: Form::Grp(op) }
    }

    pub fn add(class: &str, node: Option<usize>, shift: Q, op: OpSeries) -> Sym {
        Sym { base: Base::new(class, node), shift, form: Form::Add(op) }
    }

    pub fn shifted(&self, c: &Q) -> Sym {
        let mut s = self.clone();
        s.shift += c;
        s
    }

    pub fn is_field(&self) -> bool {
        matches!(self.form, Form::Field)
    }

    /// The operator of the additive generator (`log` of a grouplike form).
    pub fn gen_op(&self) -> Option<&OpSeries> {
        match &self.form {
            Form::Add(op) | Form::Grp(op) => Some(op),
            Form::Field => None,
        }
    }

    /// `Some(+1)` or `Some(-1)` when the symbol is `G` or `G^{-1}`.
    pub fn unit_power(&self) -> Option<i64> {
        match &self.form {
            Form::Grp(op) => op_sign(op),
            _ => None,
        }
    }
}

/// `Some(+-1)` when the operator is plus or minus the identity.
pub fn op_sign(op: &OpSeries) -> Option<i64> {
    if op.terms.len() != 1 {
        return None;
    }
    let (key, c) = op.terms.iter().next().unwrap();
    if *key != (0, 0) {
        return None;
    }
    if *c == Q::one() {
        Some(1)
    } else if *c == -Q::one() {
        Some(-1)
    } else {
        None
    }
}

/// Canonical table form, so that symbols built along different routes compare equal.
/// Symbol tables are exact series (F, G, shifts, brackets) cut for storage, so
/// every table is relabelled with the expression's truncation.
pub fn canon_op(op: &OpSeries, trunc: i64) -> OpSeries {
    let t = trunc;
    let terms: std::collections::BTreeMap<(i64, i64), Q> = op.terms.iter().filter(|((k, _), c)| *k < t && !c.is_zero()).map(|(a, b)| (*a, b.clone())).collect();
    let kmin = terms.keys().map(|(k, _)| *k).min().unwrap_or(0);
    OpSeries { terms, trunc: t, kmin }
}

fn describe_op(op: &OpSeries) -> String {
    match op_sign(op) {
        Some(1) => String::new(),
        Some(_) => "-".into(),
        None => format!("[{}]", op.describe()),
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let node = self.base.node.map(|n| format!("_{}", n + 1)).unwrap_or_default();
        let name = format!("{}{}", self.base.class, node);
        let sh = if self.shift.is_zero() { String::new() } else { format!("{{{}h}}", fmt_q(&self.shift)) };
        match &self.form {
            Form::Field => write!(f, "{}{}", name, sh),
            Form::Add(op) => write!(f, "{}gen({}){}", describe_op(op), name, sh),
            Form::Grp(op) => match op_sign(op) {
                Some(1) => write!(f, "{}{}", name, sh),
                Some(_) => write!(f, "{}^-1{}", name, sh),
                None => write!(f, "exp({}*{}){}", describe_op(op), name, sh),
            },
        }
    }
}
