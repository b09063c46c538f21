use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::rc::Rc;

/// Exponents beyond this make a value count as unbounded.
const MAX_EXPONENT: u64 = 1 << 22;

/// Monotone expressions in one variable `n`, built from constants,
/// addition, multiplication, powers and composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundExpr {
    Const(BigUint),
    Var,
    Add(Rc<BoundExpr>, Rc<BoundExpr>),
    Mul(Rc<BoundExpr>, Rc<BoundExpr>),
    Pow(Rc<BoundExpr>, Rc<BoundExpr>),
    /// The first expression evaluated at the value of the second.
    Apply(Rc<BoundExpr>, Rc<BoundExpr>),
}

impl BoundExpr {
    pub fn constant(c: u64) -> Self {
        BoundExpr::Const(BigUint::from(c))
    }

    pub fn var() -> Self {
        BoundExpr::Var
    }

    fn as_const(&self) -> Option<&BigUint> {
        match self {
            BoundExpr::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn add(a: Self, b: Self) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => BoundExpr::Const(x + y),
            (Some(x), _) if x.is_zero() => b,
            (_, Some(y)) if y.is_zero() => a,
            _ => BoundExpr::Add(Rc::new(a), Rc::new(b)),
        }
    }

    pub fn mul(a: Self, b: Self) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => BoundExpr::Const(x * y),
            (Some(x), _) | (_, Some(x)) if x.is_zero() => BoundExpr::constant(0),
            (Some(x), _) if x.is_one() => b,
            (_, Some(y)) if y.is_one() => a,
            _ => BoundExpr::Mul(Rc::new(a), Rc::new(b)),
        }
    }

    pub fn pow(a: Self, b: Self) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(x), _) if x.is_one() => BoundExpr::constant(1),
            (_, Some(y)) if y.is_zero() => BoundExpr::constant(1),
            (_, Some(y)) if y.is_one() => a,
            (Some(x), Some(y)) if y.to_u32().is_some() => BoundExpr::Const(x.pow(y.to_u32().unwrap())),
            _ => BoundExpr::Pow(Rc::new(a), Rc::new(b)),
        }
    }

    pub fn apply(f: Self, arg: Self) -> Self {
        match (&f, &arg) {
            (BoundExpr::Const(_), _) => f,
            (BoundExpr::Var, _) => arg,
            (_, BoundExpr::Var) => f,
            (_, BoundExpr::Const(c)) => match f.eval_big(c) {
                Some(v) => BoundExpr::Const(v),
                None => BoundExpr::Apply(Rc::new(f), Rc::new(arg)),
            },
            _ => BoundExpr::Apply(Rc::new(f), Rc::new(arg)),
        }
    }

    /// The value at `n`, or `None` if it is too large to compute.
    pub fn eval(&self, n: u64) -> Option<BigUint> {
        self.eval_big(&BigUint::from(n))
    }

    fn eval_big(&self, n: &BigUint) -> Option<BigUint> {
        Some(match self {
            BoundExpr::Const(c) => c.clone(),
            BoundExpr::Var => n.clone(),
            BoundExpr::Add(a, b) => a.eval_big(n)? + b.eval_big(n)?,
            BoundExpr::Mul(a, b) => a.eval_big(n)? * b.eval_big(n)?,
            BoundExpr::Pow(a, b) => {
                let base = a.eval_big(n)?;
                let exp = b.eval_big(n)?;
                if base.is_zero() || base.is_one() {
                    return Some(if exp.is_zero() { BigUint::one() } else { base });
                }
                let exp = exp.to_u64().filter(|e| e.saturating_mul(base.bits()) <= MAX_EXPONENT)?;
                base.pow(exp as u32)
            }
            BoundExpr::Apply(f, arg) => f.eval_big(&arg.eval_big(n)?)?,
        })
    }

    /// No power with a non-constant exponent.
    pub fn is_polynomial(&self) -> bool {
        match self {
            BoundExpr::Const(_) | BoundExpr::Var => true,
            BoundExpr::Add(a, b) | BoundExpr::Mul(a, b) | BoundExpr::Apply(a, b) => a.is_polynomial() && b.is_polynomial(),
            BoundExpr::Pow(a, b) => a.is_polynomial() && matches!(**b, BoundExpr::Const(_)),
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, var: &dyn Fn(&mut fmt::Formatter<'_>) -> fmt::Result) -> fmt::Result {
        match self {
            BoundExpr::Const(c) => write!(f, "{c}"),
            BoundExpr::Var => var(f),
            BoundExpr::Add(a, b) => {
                write!(f, "(")?;
                a.write(f, var)?;
                write!(f, " + ")?;
                b.write(f, var)?;
                write!(f, ")")
            }
            BoundExpr::Mul(a, b) => {
                a.write(f, var)?;
                write!(f, "*")?;
                b.write(f, var)
            }
            BoundExpr::Pow(a, b) => {
                a.write(f, var)?;
                write!(f, "^")?;
                match **b {
                    BoundExpr::Var | BoundExpr::Const(_) => b.write(f, var),
                    _ => {
                        write!(f, "(")?;
                        b.write(f, var)?;
                        write!(f, ")")
                    }
                }
            }
            BoundExpr::Apply(g, arg) => {
                let inner = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
                    write!(f, "[")?;
                    arg.write(f, var)?;
                    write!(f, "]")
                };
                g.write(f, &inner)
            }
        }
    }
}

impl fmt::Display for BoundExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, &|f| write!(f, "n"))
    }
}
