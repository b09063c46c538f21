//! Acceptance run: one line per criterion, nonzero exit if any fails.

use cbc_bounds::{recursion_bounds, sample_inputs, synthesize_bound, verify_bound};
use cbc_checker::{classify, cycle_path_diagnostics, Class, Clause};
use cbc_compile::compile_circular;
use cbc_format::{parse_proof, parse_terms};
use cbc_interp::{
    check_program_class, check_term_class, eval_proof, eval_term, EvalConfig, EvalError, OracleEnv, ProofEval, TermClass,
    TermEval, T,
};
use cbc_kernel::value::{is_prefix, len, sum_len};
use cbc_kernel::{tuple_order, validate_graph, Allowed, ProofGraph, Rule, TupleOrder, Value};
use cbc_transform::{bisimilar, box_promote, cycle_normal_form, minimize, pass_parameters, strip_safe_inputs};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

const PROOFS: [&str; 9] = ["I", "S", "C", "E", "P", "Pcut", "L", "N", "Eprime"];
const B_TERMS: [&str; 7] = ["b_concat", "b_ones", "b_pred2", "b_select", "b_flip", "b_square", "b_mul"];
const NB_TERMS: [&str; 3] = ["nb_ex", "nb_shift", "nb_tower"];
const BIG: u64 = 1 << 40;

fn corpus(path: &str) -> String {
    let p = format!("{}/../../corpus/{path}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{p}: {e}"))
}

fn proof(name: &str) -> ProofGraph {
    parse_proof(&corpus(&format!("proofs/{name}.proof"))).unwrap()
}

fn term(name: &str) -> T {
    parse_terms(&corpus(&format!("terms/{name}.term")))
        .unwrap()
        .main_term()
        .unwrap()
        .clone()
}

fn v(x: u64) -> Value {
    Value::from(x)
}

fn of_len(rng: &mut ChaCha8Rng, l: u64) -> Value {
    if l == 0 {
        return v(0);
    }
    let mut x = v(1);
    for _ in 1..l {
        x = (x << 1u32) + u8::from(rng.gen_bool(0.5));
    }
    x
}

/// Normals with total length at most `budget`, safes of length at most 10.
fn inputs(rng: &mut ChaCha8Rng, m: usize, n: usize, budget: u64) -> (Vec<Value>, Vec<Value>) {
    let xs = sample_inputs(rng, m, budget);
    let ys = (0..n)
        .map(|_| {
            let l = rng.gen_range(0..=10);
            of_len(rng, l)
        })
        .collect();
    (xs, ys)
}

fn arity_of(g: &ProofGraph) -> (usize, usize) {
    let s = g.root_node().seq;
    (s.boxed, s.plain)
}

struct Check {
    failures: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check { failures: Vec::new() }
    }

    fn that(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn classification_table(c: &mut Check) {
    let i = classify(&proof("I"));
    c.that(validate_graph(&proof("I"), Allowed::CIRCULAR).is_ok(), || "I: not valid".into());
    c.that(!i.safe && i.left_leaning && i.progressing != Some(true) && i.class == Class::None, || {
        format!("I: safe={} left_leaning={} progressing={:?} class={}", i.safe, i.left_leaning, i.progressing, i.class)
    });
    for name in ["S", "C", "P", "L", "N"] {
        let k = classify(&proof(name));
        c.that(k.class == Class::CB, || format!("{name}: class {} ({})", k.class, k.reasons(true).join("; ")));
    }
    let e = classify(&proof("E"));
    c.that(e.class == Class::CNB && !e.left_leaning, || format!("E: class {}", e.class));
    let ep = classify(&proof("Eprime"));
    c.that(!ep.safe && ep.class == Class::None, || format!("Eprime: safe={} class={}", ep.safe, ep.class));
}

fn golden_values(c: &mut Check) {
    let cfg = EvalConfig::default();
    let run = |g: &ProofGraph, xs: &[Value], ys: &[Value]| eval_proof(g, g.root, xs, ys, cfg);
    let s = proof("S");
    for x in 0..(1u64 << 12) {
        let got = run(&s, &[v(x)], &[]);
        c.that(got == Ok(v(x + 1)), || format!("S({x}) = {got:?}"));
    }
    let cp = proof("C");
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..500 {
        let l: Vec<u64> = (0..3).map(|_| rng.gen_range(0..=10)).collect();
        let (x, y, z) = (of_len(&mut rng, l[0]), of_len(&mut rng, l[1]), of_len(&mut rng, l[2]));
        // digits of z, then y, then x
        let want = (z.clone() << (len(&y) + len(&x))) + (y.clone() << len(&x)) + x.clone();
        let got = run(&cp, &[x.clone(), y.clone()], &[z.clone()]);
        c.that(got == Ok(want), || format!("C({x}, {y}; {z}) = {got:?}"));
    }
    let e = proof("E");
    for x in 0..=4u64 {
        for y in 0..=15u64 {
            let want = v(y) << (1u64 << len(&v(x)));
            let got = run(&e, &[v(x)], &[v(y)]);
            c.that(got == Ok(want), || format!("E({x}; {y}) = {got:?}"));
        }
    }
    let p = proof("P");
    for x in 0..1024u64 {
        let got = run(&p, &[v(x)], &[]);
        c.that(got == Ok(v(x.saturating_sub(1))), || format!("P({x}) = {got:?}"));
    }
    let n = proof("N");
    for k in 0..=12u64 {
        let got = run(&n, &[v(k)], &[]);
        c.that(got == Ok(v((1 << k) - 1)), || format!("N({k}) = {got:?}"));
    }
    let i = proof("I");
    for x in 0..=7u64 {
        let got = eval_proof(&i, i.root, &[v(x)], &[], EvalConfig::with_fuel(100_000));
        c.that(got == Err(EvalError::FuelExhausted), || format!("I({x}) = {got:?}"));
    }
}

fn completeness(c: &mut Check) {
    let env = OracleEnv::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let jobs = B_TERMS.iter().map(|n| (n, Class::CB, 100, 10)).chain(NB_TERMS.iter().map(|n| (n, Class::CNB, 50, 8)));
    for (name, target, samples, budget) in jobs {
        let t = term(name);
        let g = match compile_circular(&t) {
            Ok(g) => g,
            Err(e) => {
                c.that(false, || format!("{name}: {e}"));
                continue;
            }
        };
        c.that(validate_graph(&g, Allowed::CIRCULAR).is_ok(), || format!("{name}: compiled proof invalid"));
        let class = classify(&g).class;
        let ok = class == target || (target == Class::CNB && class == Class::CB);
        c.that(ok, || format!("{name}: compiled to {class}, wanted {target}"));
        let (m, n) = cbc_interp::arity(&t).unwrap();
        for _ in 0..samples {
            let (xs, ys) = inputs(&mut rng, m, n, budget);
            let want = eval_term(&t, &env, &xs, &ys);
            let got = eval_proof(&g, g.root, &xs, &ys, EvalConfig::with_fuel(BIG));
            c.that(want.is_ok() && want == got, || format!("{name}{xs:?};{ys:?}: {want:?} vs {got:?}"));
        }
    }
}

fn translation_soundness(c: &mut Check) {
    let env = OracleEnv::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for name in PROOFS {
        let g = proof(name);
        let class = classify(&g).class;
        if class == Class::None {
            continue;
        }
        let p = match cbc_translate::translate(&g) {
            Ok(p) => p,
            Err(e) => {
                c.that(false, || format!("{name}: {e}"));
                continue;
            }
        };
        if class == Class::CB {
            let r = check_program_class(&p, TermClass::Bpp);
            c.that(r.is_ok(), || format!("{name}: translation not in Bpp: {r:?}"));
        }
        let main = p.main_term().unwrap();
        let (m, n) = arity_of(&g);
        let mut ev = TermEval::new(Some(&p), &env, EvalConfig::with_fuel(BIG).strict());
        for _ in 0..100 {
            let (xs, ys) = inputs(&mut rng, m, n, 10);
            let want = eval_proof(&g, g.root, &xs, &ys, EvalConfig::with_fuel(BIG));
            ev.refuel();
            let got = ev.eval(main, &xs, &ys);
            c.that(want.is_ok() && want == got, || format!("{name}{xs:?};{ys:?}: {want:?} vs {got:?}"));
            c.that(ev.stats.guard_fallbacks == 0, || format!("{name}: guard fallback"));
        }
    }
}

fn round_trip(c: &mut Check) {
    let env = OracleEnv::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for name in B_TERMS {
        let t = term(name);
        let p = match compile_circular(&t).map_err(|e| e.to_string()).and_then(|g| cbc_translate::translate(&g).map_err(|e| e.to_string())) {
            Ok(p) => p,
            Err(e) => {
                c.that(false, || format!("{name}: {e}"));
                continue;
            }
        };
        let (m, n) = cbc_interp::arity(&t).unwrap();
        for _ in 0..100 {
            let (xs, ys) = inputs(&mut rng, m, n, 10);
            let want = eval_term(&t, &env, &xs, &ys);
            let got = cbc_interp::eval_pp(&p, &p.main, &env, &xs, &ys, EvalConfig::with_fuel(BIG));
            c.that(want.is_ok() && want == got, || format!("{name}{xs:?};{ys:?}: {want:?} vs {got:?}"));
        }
    }
}

fn growth_bounds(c: &mut Check) {
    for name in B_TERMS.iter().chain(NB_TERMS.iter()) {
        let t = term(name);
        match verify_bound(name, &t, 200, 6) {
            Ok(r) => {
                c.that(r.violations.is_empty(), || format!("{name}: {} violations", r.violations.len()));
                c.that(r.unbounded == 0, || format!("{name}: bound not computable on {} samples", r.unbounded));
            }
            Err(e) => c.that(false, || format!("{name}: {e}")),
        }
        let unnested = check_term_class(&t, TermClass::B).is_ok() || check_term_class(&t, TermClass::SB).is_ok();
        if unnested {
            let b = synthesize_bound(&t);
            c.that(b.d == 1 && b.is_polynomial, || format!("{name}: d={} e={}", b.d, b.e));
        }
        for r in recursion_bounds(&t) {
            for n in 1..=64u64 {
                let (f, h, f1) = (r.e_f.eval(n), r.e_h.eval(n), r.e_f.eval(n - 1));
                let ok = matches!((&f, &h, &f1), (Some(f), Some(h), Some(f1)) if *f >= h + v(r.d_h) * f1);
                c.that(ok, || format!("{name}: recursion invariant at {n}"));
            }
        }
    }
}

const WITH_ORACLES: Allowed = Allowed {
    srec: false,
    oracle: true,
    dis: false,
};

const STRIP_FIXTURES: [&str; 3] = [
    "proof a root 0\n\
     node 0 : cutN seq bN, N => bN premises [1, 3]\n\
     node 1 : wB seq bN, N => N premises [2]\n\
     node 2 : id seq N => N premises []\n\
     node 3 : s1 seq bN, N, N => bN premises [4]\n\
     node 4 : wN seq bN, N, N => bN premises [5]\n\
     node 5 : wN seq bN, N => bN premises [6]\n\
     node 6 : boxR seq bN => bN premises [7]\n\
     node 7 : s0 seq bN => N premises [8]\n\
     node 8 : boxL seq bN => N premises [9]\n\
     node 9 : id seq N => N premises []\n",
    "proof b root 0\n\
     node 0 : cutB seq bN => bN premises [1, 2]\n\
     node 1 : boxR seq bN => bN premises [7]\n\
     node 2 : eB(0) seq bN, bN => bN premises [3]\n\
     node 3 : wB seq bN, bN => bN premises [1]\n\
     node 7 : s0 seq bN => N premises [8]\n\
     node 8 : boxL seq bN => N premises [9]\n\
     node 9 : id seq N => N premises []\n",
    "proof c root 0\n\
     node 0 : boxL seq bN, N => bN premises [1]\n\
     node 1 : wN seq N, N => bN premises [2]\n\
     node 2 : wN seq N => bN premises [3]\n\
     node 3 : boxR seq => bN premises [4]\n\
     node 4 : zero seq => N premises []\n",
];

const PASSING_FIXTURES: [&str; 4] = [
    "proof h root 0\n\
     node 0 : cutN seq bN, N => N premises [1, 3]\n\
     node 1 : wB seq bN, N => N premises [2]\n\
     node 2 : oracle(a) seq N => N premises []\n\
     node 3 : wB seq bN, N, N => N premises [4]\n\
     node 4 : eN(0) seq N, N => N premises [5]\n\
     node 5 : wN seq N, N => N premises [6]\n\
     node 6 : oracle(a) seq N => N premises []\n",
    "proof h root 0\n\
     node 0 : eB(0) seq bN, bN, N => N premises [1]\n\
     node 1 : wB seq bN, bN, N => N premises [2]\n\
     node 2 : wB seq bN, N => N premises [3]\n\
     node 3 : oracle(a) seq N => N premises []\n",
    "proof h root 0\n\
     node 0 : condN seq bN, N => N premises [1, 3, 3]\n\
     node 1 : wB seq bN => N premises [2]\n\
     node 2 : zero seq => N premises []\n\
     node 3 : cutN seq bN, N => N premises [4, 6]\n\
     node 4 : wB seq bN, N => N premises [5]\n\
     node 5 : oracle(a) seq N => N premises []\n\
     node 6 : s1 seq bN, N, N => N premises [7]\n\
     node 7 : wB seq bN, N, N => N premises [8]\n\
     node 8 : wN seq N, N => N premises [9]\n\
     node 9 : id seq N => N premises []\n",
    "proof h root 0\n\
     node 0 : wB seq bN, N => N premises [1]\n\
     node 1 : oracle(a) seq N => N premises []\n",
];

/// An oracle reading the normal inputs of the enclosing proof.
fn oracle_value(xs: &[Value], z: &Value) -> Value {
    xs.iter().enumerate().fold(z * 7u32 + 1u32, |acc, (i, x)| acc + x * (3u32 + i as u32))
}

fn transformations(c: &mut Check) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in PROOFS {
        if name == "I" {
            continue;
        }
        let g = proof(name);
        let p = match box_promote(&g) {
            Ok(p) => p,
            Err(e) => {
                c.that(false, || format!("promote {name}: {e}"));
                continue;
            }
        };
        let plain = p.contains_rule(|r| matches!(r, Rule::CutN | Rule::CondN | Rule::WeakN | Rule::ExchN(_)));
        c.that(!plain, || format!("promote {name}: plain rules remain"));
        let (m, n) = arity_of(&g);
        let budget = if name == "Eprime" { 3 } else { 10 };
        for _ in 0..100 {
            let (xs, ys) = inputs(&mut rng, m, n, budget);
            let want = eval_proof(&g, g.root, &xs, &ys, EvalConfig::with_fuel(BIG));
            let all: Vec<Value> = xs.iter().chain(ys.iter()).cloned().collect();
            let got = eval_proof(&p, p.root, &all, &[], EvalConfig::with_fuel(BIG));
            c.that(want.is_ok() && want == got, || format!("promote {name}{xs:?};{ys:?}: {want:?} vs {got:?}"));
        }
    }
    for src in STRIP_FIXTURES {
        let g = parse_proof(src).unwrap();
        let s = match strip_safe_inputs(&g) {
            Ok(s) => s,
            Err(e) => {
                c.that(false, || format!("strip {}: {e}", g.name));
                continue;
            }
        };
        let (m, n) = arity_of(&g);
        for _ in 0..100 {
            let (xs, ys) = inputs(&mut rng, m, n, 10);
            let want = eval_proof(&g, g.root, &xs, &ys, EvalConfig::default());
            let got = eval_proof(&s, s.root, &xs, &[], EvalConfig::default());
            c.that(want.is_ok() && want == got, || format!("strip {}{xs:?};{ys:?}: {want:?} vs {got:?}", g.name));
        }
    }
    for src in PASSING_FIXTURES {
        let g = parse_proof(src).unwrap();
        c.that(validate_graph(&g, WITH_ORACLES).is_ok(), || "fixture invalid".into());
        let d = match pass_parameters(&g, "a", "a*") {
            Ok(d) => d,
            Err(e) => {
                c.that(false, || format!("pass_parameters: {e}"));
                continue;
            }
        };
        c.that(validate_graph(&d, WITH_ORACLES).is_ok(), || "passed proof invalid".into());
        c.that(classify(&g).class == classify(&d).class, || "pass_parameters changes the class".into());
        let (m, n) = arity_of(&g);
        for _ in 0..100 {
            let (xs, ys) = inputs(&mut rng, m, n, 10);
            let outer = xs.clone();
            let env0 = OracleEnv::new().with("a", move |_, ys: &[Value]| oracle_value(&outer, &ys[0]));
            let env1 = OracleEnv::new().with("a*", |xs: &[Value], ys: &[Value]| oracle_value(xs, &ys[0]));
            let want = ProofEval::new(&g, &env0, EvalConfig::default()).eval(g.root, &xs, &ys);
            let got = ProofEval::new(&d, &env1, EvalConfig::default()).eval(d.root, &xs, &ys);
            c.that(want.is_ok() && want == got, || format!("pass_parameters {xs:?};{ys:?}: {want:?} vs {got:?}"));
        }
    }
}

fn cycle_normal_forms(c: &mut Check) {
    let mut e_flagged = false;
    for name in PROOFS {
        let g = proof(name);
        let cnf = cycle_normal_form(&g);
        let refold = cnf.refold();
        let (_, canon) = minimize(&g);
        let buds = cnf.buds();
        for a in &buds {
            for b in &buds {
                c.that(a == b || !cnf.is_ancestor(*a, *b), || format!("{name}: bud {a} below bud {b}"));
            }
        }
        for (id, node) in &cnf.tree.nodes {
            if node.premises.is_empty() {
                let ok = matches!(node.rule, Rule::Id | Rule::Zero | Rule::Oracle(_) | Rule::Dis(_));
                c.that(ok, || format!("{name}: leaf {id} is {}", node.rule));
            }
            if let Rule::Dis(comp) = node.rule {
                c.that(cnf.origin[&comp] == cnf.origin[id], || format!("{name}: bud {id} and companion differ"));
                let orig = canon.iter().find(|(_, b)| **b == cnf.origin[id]).map(|(o, _)| *o);
                let ok = orig.is_some_and(|o| bisimilar(&g, o, &refold, comp));
                c.that(ok, || format!("{name}: bud {id} not bisimilar to its companion"));
            }
        }
        let reports = cycle_path_diagnostics(&cnf.tree);
        let class = classify(&g).class;
        if class != Class::None {
            for r in &reports {
                let bad: Vec<_> = r
                    .violations
                    .iter()
                    .filter(|v| class == Class::CB || v.clause != Clause::Three)
                    .collect();
                c.that(r.has_cond_box && bad.is_empty(), || format!("{name}: bud {} violations {bad:?}", r.bud));
            }
        }
        if name == "E" {
            e_flagged = reports.iter().any(|r| r.violations_of(Clause::Three).count() > 0);
        }
    }
    c.that(e_flagged, || "E's right-cut loop not flagged".into());
}

fn order_theory(c: &mut Check) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let trunc = |rng: &mut ChaCha8Rng, x: &Value| -> Value {
        let k = rng.gen_range(0..=len(x));
        x >> k as usize
    };
    for _ in 0..10_000 {
        let l = rng.gen_range(0..=16);
        let z = of_len(&mut rng, l);
        let y = if rng.gen_bool(0.5) { trunc(&mut rng, &z) } else { of_len(&mut rng, l) };
        let x = if rng.gen_bool(0.5) { trunc(&mut rng, &y) } else { of_len(&mut rng, l) };
        c.that(is_prefix(&x, &x), || format!("not reflexive at {x}"));
        if is_prefix(&x, &y) && is_prefix(&y, &x) {
            c.that(x == y, || format!("not antisymmetric at {x}, {y}"));
        }
        if is_prefix(&x, &y) && is_prefix(&y, &z) {
            c.that(is_prefix(&x, &z), || format!("not transitive at {x}, {y}, {z}"));
        }
    }
    for _ in 0..10_000 {
        let k = rng.gen_range(1..=4);
        let start: Vec<Value> = (0..k)
            .map(|_| {
                let l = rng.gen_range(0..=8);
                of_len(&mut rng, l)
            })
            .collect();
        let mut cur = start.clone();
        let mut steps = 0u64;
        while cur.iter().any(|x| len(x) > 0) {
            let live: Vec<usize> = (0..k).filter(|&i| len(&cur[i]) > 0).collect();
            let i = *live.choose(&mut rng).unwrap();
            let mut next = cur.clone();
            next[i] = &cur[i] >> rng.gen_range(1..=len(&cur[i])) as usize;
            for j in 0..k {
                if j != i && rng.gen_bool(0.3) {
                    next[j] = trunc(&mut rng, &cur[j]);
                }
            }
            next.shuffle(&mut rng);
            let strict = tuple_order(&next, &cur).is_ok_and(|o| o.is_strict());
            c.that(strict, || format!("{next:?} not below {cur:?}"));
            steps += 1;
            cur = next;
        }
        c.that(steps <= sum_len(&start), || format!("chain of {steps} from {start:?}"));
    }
    for _ in 0..10_000 {
        let k = rng.gen_range(0..=4);
        let ys: Vec<Value> = (0..k)
            .map(|_| {
                let l = rng.gen_range(0..=6);
                of_len(&mut rng, l)
            })
            .collect();
        let mut xs: Vec<Value> = if rng.gen_bool(0.7) {
            ys.iter().map(|y| trunc(&mut rng, y)).collect()
        } else {
            (0..k)
                .map(|_| {
                    let l = rng.gen_range(0..=6);
                    of_len(&mut rng, l)
                })
                .collect()
        };
        xs.shuffle(&mut rng);
        let fwd = tuple_order(&xs, &ys).unwrap();
        let back = tuple_order(&ys, &xs).unwrap();
        let coherent = fwd.is_strict() == (back == TupleOrder::NotRelated && fwd.is_subset_eq());
        c.that(coherent, || format!("incoherent at {xs:?}, {ys:?}"));
    }
}

type Criterion = (&'static str, Option<Duration>, fn(&mut Check));

fn main() {
    let criteria: [Criterion; 9] = [
        ("example classification table", Some(Duration::from_secs(1)), classification_table),
        ("evaluator golden values", Some(Duration::from_secs(1)), golden_values),
        ("completeness pipelines", Some(Duration::from_secs(30)), completeness),
        ("translation soundness", Some(Duration::from_secs(60)), translation_soundness),
        ("round trip", None, round_trip),
        ("growth bound suite", Some(Duration::from_secs(10)), growth_bounds),
        ("transformation preservation", None, transformations),
        ("cycle normal form structure", None, cycle_normal_forms),
        ("order theory", None, order_theory),
    ];
    let mut failed = 0;
    for (i, (title, limit, f)) in criteria.into_iter().enumerate() {
        let mut c = Check::new();
        let start = Instant::now();
        if let Err(e) = catch_unwind(AssertUnwindSafe(|| f(&mut c))) {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            c.failures.push(format!("panicked: {msg}"));
        }
        let took = start.elapsed();
        if let Some(limit) = limit {
            if took > limit {
                c.failures.push(format!("took {took:.2?}, limit {limit:?}"));
            }
        }
        let verdict = if c.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict}  {title} ({took:.2?})", i + 1);
        for f in c.failures.iter().take(5) {
            println!("    {f}");
        }
        if c.failures.len() > 5 {
            println!("    ... {} more", c.failures.len() - 5);
        }
        if !c.failures.is_empty() {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
}
