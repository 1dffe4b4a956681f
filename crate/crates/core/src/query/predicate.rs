//! Scalar values and the binary predicates a query may place on them.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

/// A property value stored on a graph element or used as a query operand.
///
/// Values of different types never compare equal. Integers and floats are
/// compared numerically after coercing both sides to `f64`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
}

impl Value {
    fn rank(&self) -> u8 {
        match self {
            Value::Bool(_) => 0,
            Value::Int(_) => 1,
            Value::Float(_) => 2,
            Value::Str(_) => 3,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Float(f) => Some(*f),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Str(s) => Some(s),
            _ => None,
        }
    }

    /// Semantic comparison used by predicates. `None` when the operands are
    /// not comparable (cross-type, NaN, or booleans under an ordering).
    pub fn compare(&self, other: &Value) -> Option<Ordering> {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => Some(a.cmp(b)),
            (Value::Str(a), Value::Str(b)) => Some(a.cmp(b)),
            (Value::Bool(a), Value::Bool(b)) => Some(a.cmp(b)),
            _ => match (self.as_f64(), other.as_f64()) {
                (Some(a), Some(b)) => a.partial_cmp(&b),
                _ => None,
            },
        }
    }

    pub fn sem_eq(&self, other: &Value) -> bool {
        self.compare(other) == Some(Ordering::Equal)
    }
}

// Structural (total) ordering so values can live in ordered sets and maps.
impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Value {}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Bool(a), Value::Bool(b)) => a.cmp(b),
            (Value::Int(a), Value::Int(b)) => a.cmp(b),
            (Value::Float(a), Value::Float(b)) => a.total_cmp(b),
            (Value::Str(a), Value::Str(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl Hash for Value {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank().hash(state);
        match self {
            Value::Bool(b) => b.hash(state),
            Value::Int(i) => i.hash(state),
            Value::Float(f) => f.to_bits().hash(state),
            Value::Str(s) => s.hash(state),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) => write!(f, "{x:?}"),
            Value::Str(s) => write!(f, "{s:?}"),
        }
    }
}

/// Right-hand operand of a property predicate: a scalar, or a list for `IN`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QueryValue {
    Scalar(Value),
    List(Vec<Value>),
}

impl fmt::Display for QueryValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryValue::Scalar(v) => v.fmt(f),
            QueryValue::List(vs) => {
                f.write_str("[")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    v.fmt(f)?;
                }
                f.write_str("]")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Predicate {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Neq,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Leq,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Geq,
    #[serde(rename = "IN")]
    In,
    #[serde(rename = "CONTAINS")]
    Contains,
}

impl Predicate {
    pub const ALL: [Predicate; 8] = [
        Predicate::Eq,
        Predicate::Neq,
        Predicate::Lt,
        Predicate::Leq,
        Predicate::Gt,
        Predicate::Geq,
        Predicate::In,
        Predicate::Contains,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Predicate::Eq => "=",
            Predicate::Neq => "!=",
            Predicate::Lt => "<",
            Predicate::Leq => "<=",
            Predicate::Gt => ">",
            Predicate::Geq => ">=",
            Predicate::In => "IN",
            Predicate::Contains => "CONTAINS",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Predicate> {
        Self::ALL.into_iter().find(|p| p.symbol() == s)
    }

    /// Whether `operand` has the shape this predicate expects.
    pub fn accepts(self, operand: &QueryValue) -> bool {
        matches!(
            (self, operand),
            (Predicate::In, QueryValue::List(_)) | (Predicate::Contains, QueryValue::Scalar(Value::Str(_)))
        ) || !matches!(self, Predicate::In | Predicate::Contains) && matches!(operand, QueryValue::Scalar(_))
    }

    /// Evaluates `stored θ operand`. Ill-typed combinations are unsatisfied.
    pub fn eval(self, stored: &Value, operand: &QueryValue) -> bool {
        match (self, operand) {
            (Predicate::In, QueryValue::List(vs)) => vs.iter().any(|v| stored.sem_eq(v)),
            (Predicate::Contains, QueryValue::Scalar(Value::Str(needle))) => {
                stored.as_str().is_some_and(|s| s.contains(needle.as_str()))
            }
            (_, QueryValue::Scalar(v)) => {
                let Some(ord) = stored.compare(v) else {
                    return false;
                };
                let ordered = !matches!(stored, Value::Bool(_));
                match self {
                    Predicate::Eq => ord == Ordering::Equal,
                    Predicate::Neq => ord != Ordering::Equal,
                    Predicate::Lt => ordered && ord == Ordering::Less,
                    Predicate::Leq => ordered && ord != Ordering::Greater,
                    Predicate::Gt => ordered && ord == Ordering::Greater,
                    Predicate::Geq => ordered && ord != Ordering::Less,
                    Predicate::In | Predicate::Contains => false,
                }
            }
            _ => false,
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}
