use cbc_format::parse_proof;
use cbc_interp::{eval_proof, EvalConfig, EvalError, ProofEval, OracleEnv};
use cbc_kernel::value::len;
use cbc_kernel::{ProofGraph, Value};

fn load(name: &str) -> ProofGraph {
    let path = format!("{}/../../corpus/proofs/{name}.proof", env!("CARGO_MANIFEST_DIR"));
    parse_proof(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn v(x: u64) -> Value {
    Value::from(x)
}

fn run(g: &ProofGraph, xs: &[u64], ys: &[u64]) -> Result<Value, EvalError> {
    let xs: Vec<Value> = xs.iter().map(|&x| v(x)).collect();
    let ys: Vec<Value> = ys.iter().map(|&y| v(y)).collect();
    eval_proof(g, g.root, &xs, &ys, EvalConfig::default())
}

#[test]
fn successor() {
    let s = load("S");
    assert_eq!(run(&s, &[0], &[]), Ok(v(1)));
    for x in 1..=9 {
        assert_eq!(run(&s, &[x], &[]), Ok(v(x + 1)));
    }
}

#[test]
fn concatenation() {
    let c = load("C");
    assert_eq!(run(&c, &[0, 0], &[5]), Ok(v(5)));
    // digits of z, then y, then x
    assert_eq!(run(&c, &[2, 3], &[1]), Ok(v(0b11110)));
}

#[test]
fn exponentiation() {
    let e = load("E");
    assert_eq!(run(&e, &[1], &[1]), Ok(v(4)));
    for x in 0..=4u64 {
        for y in 0..=3u64 {
            let want = v(y) << (1usize << len(&v(x)));
            assert_eq!(run(&e, &[x], &[y]), Ok(want));
        }
    }
}

#[test]
fn diverges_without_progress() {
    let i = load("I");
    let cfg = EvalConfig::with_fuel(100_000);
    assert_eq!(eval_proof(&i, i.root, &[v(5)], &[], cfg), Err(EvalError::FuelExhausted));
}

#[test]
fn appendix_examples() {
    let p = load("P");
    let pc = load("Pcut");
    for x in 0..64u64 {
        assert_eq!(run(&p, &[x], &[]), Ok(v(x.saturating_sub(1))));
        assert_eq!(run(&pc, &[x], &[]), Ok(v(x.saturating_sub(1))));
    }
    assert_eq!(run(&p, &[6], &[]), Ok(v(5)));
    let l = load("L");
    for x in 0..20u64 {
        for y in 0..5u64 {
            let k = len(&v(x));
            assert_eq!(run(&l, &[x], &[y]), Ok(v((y << k) + (1 << k) - 1)));
        }
    }
    let n = load("N");
    for k in 0..=10u64 {
        assert_eq!(run(&n, &[k], &[]), Ok(v((1 << k) - 1)));
    }
    let ep = load("Eprime");
    // E'(x, y) applies y -> ex(y; 1) = 2^(2^|y|) once per digit of x
    assert_eq!(run(&ep, &[0, 3], &[]), Ok(v(3)));
    assert_eq!(run(&ep, &[1, 3], &[]), Ok(v(16)));
    assert_eq!(run(&ep, &[1, 0], &[]), Ok(v(2)));
}

#[test]
fn memo_does_not_change_values() {
    let e = load("E");
    let env = OracleEnv::new();
    for x in 0..12u64 {
        let a = ProofEval::new(&e, &env, EvalConfig::default()).eval(0, &[v(x)], &[v(3)]);
        let b = ProofEval::new(&e, &env, EvalConfig { memo: false, ..EvalConfig::default() }).eval(0, &[v(x)], &[v(3)]);
        assert_eq!(a, b);
    }
}

#[test]
fn arity_mismatch() {
    let s = load("S");
    assert!(matches!(run(&s, &[1, 2], &[]), Err(EvalError::Arity(_))));
}

#[test]
fn fuel_is_monotone() {
    let s = load("S");
    let needed = {
        let env = OracleEnv::new();
        let mut ev = ProofEval::new(&s, &env, EvalConfig::default());
        ev.eval(0, &[v(100)], &[]).unwrap();
        ev.steps
    };
    let cfg = EvalConfig::with_fuel(needed);
    assert_eq!(eval_proof(&s, 0, &[v(100)], &[], cfg), Ok(v(101)));
    let cfg = EvalConfig::with_fuel(needed - 1);
    assert_eq!(eval_proof(&s, 0, &[v(100)], &[], cfg), Err(EvalError::FuelExhausted));
}
