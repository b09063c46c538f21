//! Natural numbers in binary notation.

use num_bigint::BigUint;
use num_traits::Zero;

pub type Value = BigUint;

/// Number of binary digits; `len(0) == 0`.
pub fn len(x: &Value) -> u64 {
    x.bits()
}

pub fn s0(x: &Value) -> Value {
    x << 1u32
}

pub fn s1(x: &Value) -> Value {
    (x << 1u32) + 1u32
}

pub fn pred(x: &Value) -> Value {
    x >> 1u32
}

pub fn is_odd(x: &Value) -> bool {
    x.bit(0)
}

pub fn sum_len(xs: &[Value]) -> u64 {
    xs.iter().map(len).sum()
}

pub fn max_len(xs: &[Value]) -> u64 {
    xs.iter().map(len).max().unwrap_or(0)
}

/// `x` is a prefix of `y` when `y = x * 2^n + z` for some `z < 2^n`.
pub fn is_prefix(x: &Value, y: &Value) -> bool {
    if x.is_zero() {
        return true;
    }
    let (lx, ly) = (len(x), len(y));
    lx <= ly && &(y >> (ly - lx)) == x
}

pub fn is_strict_prefix(x: &Value, y: &Value) -> bool {
    x != y && is_prefix(x, y)
}

pub fn from_u64(n: u64) -> Value {
    Value::from(n)
}
