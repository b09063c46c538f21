use crate::{synthesize_bound, synthesize_program, BoundPair};
use cbc_interp::{arity, check_program, EvalConfig, EvalError, OracleEnv, PPProgram, TermEval, T};
use cbc_kernel::value::len;
use cbc_kernel::Value;
use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const NORMAL_BUDGET: u64 = 16;
const SAFE_LEN: u64 = 16;

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub normals: Vec<String>,
    pub safes: Vec<String>,
    pub value_len: u64,
    pub bound: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub e: String,
    pub d: u64,
    pub is_polynomial: bool,
    pub samples: usize,
    /// Largest and smallest `bound - |f(x; y)|` over samples whose bound
    /// could be computed.
    pub max_slack: Option<String>,
    pub min_slack: Option<String>,
    /// Samples whose bound was too large to compute.
    pub unbounded: usize,
    pub violations: Vec<Violation>,
}

impl BoundReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `k` random naturals whose binary lengths add up to at most `budget`.
pub fn sample_inputs(rng: &mut impl Rng, k: usize, budget: u64) -> Vec<Value> {
    let mut left = budget;
    (0..k)
        .map(|_| {
            let l = rng.gen_range(0..=left);
            left -= l;
            random_of_len(rng, l)
        })
        .collect()
}

fn random_of_len(rng: &mut impl Rng, l: u64) -> Value {
    let mut v = Value::from(0u8);
    for i in 0..l {
        let bit = i == 0 || rng.gen_bool(0.5);
        v = (v << 1u32) + u8::from(bit);
    }
    v
}

/// Checks the synthesized bound of a closed term on seeded random inputs
/// with `Σ|x| <= 16` and safe inputs of length at most 16.
pub fn verify_bound(name: &str, t: &T, samples: usize, seed: u64) -> Result<BoundReport, EvalError> {
    verify_pair(name, t, &synthesize_bound(t), samples, seed)
}

/// As `verify_bound` with a given bound, for testing the harness itself.
pub fn verify_pair(name: &str, t: &T, pair: &BoundPair, samples: usize, seed: u64) -> Result<BoundReport, EvalError> {
    run(name, None, t, pair, samples, seed)
}

/// Checks the bound of a program's main function.
pub fn verify_program(name: &str, p: &PPProgram, samples: usize, seed: u64) -> Result<BoundReport, EvalError> {
    let bounds = synthesize_program(p);
    let (_, pair) = bounds
        .iter()
        .find(|(n, _)| *n == p.main)
        .ok_or_else(|| EvalError::UnknownName(p.main.clone()))?;
    let t = p.main_term().ok_or_else(|| EvalError::Malformed("empty program".into()))?;
    run(name, Some(p), t, pair, samples, seed)
}

fn run(name: &str, prog: Option<&PPProgram>, t: &T, pair: &BoundPair, samples: usize, seed: u64) -> Result<BoundReport, EvalError> {
    let (m, n) = match prog {
        Some(p) => {
            let arities = check_program(p).map_err(|e| EvalError::Malformed(e.to_string()))?;
            arities[&p.main]
        }
        None => arity(t).map_err(|e| EvalError::Malformed(e.to_string()))?,
    };
    let env = OracleEnv::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = BoundReport {
        name: name.to_string(),
        e: pair.e.to_string(),
        d: pair.d,
        is_polynomial: pair.is_polynomial,
        samples,
        max_slack: None,
        min_slack: None,
        unbounded: 0,
        violations: Vec::new(),
    };
    let (mut lo, mut hi): (Option<BigInt>, Option<BigInt>) = (None, None);
    for _ in 0..samples {
        let xs = sample_inputs(&mut rng, m, NORMAL_BUDGET);
        let ys: Vec<Value> = (0..n)
            .map(|_| {
                let l = rng.gen_range(0..=SAFE_LEN);
                random_of_len(&mut rng, l)
            })
            .collect();
        let v = TermEval::new(prog, &env, EvalConfig::with_fuel(u64::MAX)).eval(t, &xs, &ys)?;
        let sum: u64 = xs.iter().map(|x| len(x) as u64).sum();
        let max_y = ys.iter().map(|y| len(y) as u64).max().unwrap_or(0);
        let Some(e) = pair.e.eval(sum) else {
            report.unbounded += 1;
            continue;
        };
        let bound: BigUint = e + max_y;
        let slack = BigInt::from(bound.clone()) - BigInt::from(len(&v) as u64);
        if slack < BigInt::from(0) {
            report.violations.push(Violation {
                normals: xs.iter().map(|x| x.to_string()).collect(),
                safes: ys.iter().map(|y| y.to_string()).collect(),
                value_len: len(&v) as u64,
                bound: bound.to_string(),
            });
        }
        lo = Some(lo.map_or(slack.clone(), |l| l.min(slack.clone())));
        hi = Some(hi.map_or(slack.clone(), |h| h.max(slack)));
    }
    report.min_slack = lo.map(|x| x.to_string());
    report.max_slack = hi.map(|x| x.to_string());
    Ok(report)
}
