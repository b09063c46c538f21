use cbc_checker::classify;
use cbc_format::parse_proof;
use cbc_interp::{
    check_term_class, eval_proof, eval_term, EvalConfig, Family, OracleEnv, ProofEval, Term, TermClass, T,
};
use cbc_kernel::{validate_graph, Allowed, NodeId, ProofGraph, Rule, Value};
use cbc_transform::{box_promote, pass_parameters, reduce_simultaneous, strip_safe_inputs, TransformError};
use std::collections::BTreeSet;

fn load(name: &str) -> ProofGraph {
    let path = format!("{}/../../corpus/proofs/{name}.proof", env!("CARGO_MANIFEST_DIR"));
    parse_proof(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn v(x: u64) -> Value {
    Value::from(x)
}

fn vals(xs: &[u64]) -> Vec<Value> {
    xs.iter().map(|&x| v(x)).collect()
}

/// Whether some cycle avoids every boxed conditional.
fn cycle_without_cond_box(g: &ProofGraph) -> bool {
    fn visit(g: &ProofGraph, n: NodeId, state: &mut std::collections::BTreeMap<NodeId, u8>) -> bool {
        state.insert(n, 1);
        for p in &g.node(n).premises {
            if g.node(*p).rule == Rule::CondBox {
                continue;
            }
            match state.get(p) {
                Some(1) => return true,
                Some(_) => {}
                None => {
                    if visit(g, *p, state) {
                        return true;
                    }
                }
            }
        }
        state.insert(n, 2);
        false
    }
    let mut state = std::collections::BTreeMap::new();
    g.reachable()
        .into_iter()
        .filter(|n| g.node(*n).rule != Rule::CondBox)
        .any(|n| !state.contains_key(&n) && visit(g, n, &mut state))
}

#[test]
fn promotion_preserves_values() {
    let cases: [(&str, &[&[u64]]); 8] = [
        ("S", &[&[0], &[1], &[6], &[13]]),
        ("C", &[&[2, 3, 1], &[0, 0, 5], &[5, 1, 2]]),
        ("E", &[&[0, 1], &[3, 1], &[2, 5]]),
        ("L", &[&[0, 0], &[5, 2], &[7, 3]]),
        ("P", &[&[0], &[1], &[6], &[9]]),
        ("Pcut", &[&[0], &[1], &[6], &[9]]),
        ("N", &[&[0], &[1], &[2], &[3]]),
        ("Eprime", &[&[0, 1], &[1, 1], &[2, 3]]),
    ];
    let cfg = EvalConfig::with_fuel(5_000_000);
    for (name, inputs) in cases {
        let g = load(name);
        let b = g.root_node().seq.boxed;
        let p = box_promote(&g).unwrap();
        validate_graph(&p, Allowed::CIRCULAR).unwrap_or_else(|e| panic!("{name}: {e:?}"));
        let rs = p.root_node().seq;
        assert_eq!((rs.boxed, rs.plain), (b + g.root_node().seq.plain, 0));
        for input in inputs {
            let want = eval_proof(&g, g.root, &vals(&input[..b]), &vals(&input[b..]), cfg.clone());
            let got = eval_proof(&p, p.root, &vals(input), &[], cfg.clone());
            assert_eq!(want, got, "{name} {input:?}");
        }
        assert_eq!(cycle_without_cond_box(&g), cycle_without_cond_box(&p), "{name}");
    }
}

#[test]
fn promotion_rejects_recursion_rule() {
    let g = parse_proof(
        "proof r root 0\n\
         node 0 : srec seq bN => N premises [1, 2, 2]\n\
         node 1 : zero seq => N premises []\n\
         node 2 : wN seq bN, N => N premises [3]\n\
         node 3 : wB seq bN => N premises [4]\n\
         node 4 : zero seq => N premises []\n",
    )
    .unwrap();
    assert!(matches!(box_promote(&g), Err(TransformError::Unsupported(_))));
}

#[test]
fn stripping_ignores_safes() {
    let a = parse_proof(
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
    )
    .unwrap();
    let s = strip_safe_inputs(&a).unwrap();
    validate_graph(&s, Allowed::CIRCULAR).unwrap();
    let rs = s.root_node().seq;
    assert_eq!((rs.boxed, rs.plain), (1, 0));
    for x in 0..6 {
        for y in 0..4 {
            let cfg = EvalConfig::default();
            let want = eval_proof(&a, a.root, &[v(x)], &[v(y)], cfg.clone()).unwrap();
            assert_eq!(want, v(4 * x + 1));
            assert_eq!(eval_proof(&s, s.root, &[v(x)], &[], cfg), Ok(want));
        }
    }

    let b = parse_proof(
        "proof b root 0\n\
         node 0 : cutB seq bN => bN premises [1, 2]\n\
         node 1 : boxR seq bN => bN premises [7]\n\
         node 2 : eB(0) seq bN, bN => bN premises [3]\n\
         node 3 : wB seq bN, bN => bN premises [1]\n\
         node 7 : s0 seq bN => N premises [8]\n\
         node 8 : boxL seq bN => N premises [9]\n\
         node 9 : id seq N => N premises []\n",
    )
    .unwrap();
    let s = strip_safe_inputs(&b).unwrap();
    validate_graph(&s, Allowed::CIRCULAR).unwrap();
    assert_eq!(eval_proof(&s, s.root, &[v(3)], &[], EvalConfig::default()), Ok(v(12)));

    let c = parse_proof(
        "proof c root 0\n\
         node 0 : boxL seq bN, N => bN premises [1]\n\
         node 1 : wN seq N, N => bN premises [2]\n\
         node 2 : wN seq N => bN premises [3]\n\
         node 3 : boxR seq => bN premises [4]\n\
         node 4 : zero seq => N premises []\n",
    )
    .unwrap();
    let s = strip_safe_inputs(&c).unwrap();
    validate_graph(&s, Allowed::CIRCULAR).unwrap();
    assert_eq!(s.root_node().rule, Rule::WeakBox);
    assert_eq!(eval_proof(&s, s.root, &[v(3)], &[], EvalConfig::default()), Ok(v(0)));
}

#[test]
fn stripping_errors() {
    let lp = parse_proof("proof l root 0\nnode 0 : s0 seq bN => bN premises [0]\n").unwrap();
    assert!(matches!(strip_safe_inputs(&lp), Err(TransformError::NotProgressing(_))));
    assert!(matches!(strip_safe_inputs(&load("S")), Err(TransformError::Unsupported(_))));
}

const WITH_ORACLES: Allowed = Allowed {
    srec: false,
    oracle: true,
    dis: false,
};

fn with_normals(xs: &[Value], f: impl Fn(&[Value], &Value) -> Value + 'static) -> OracleEnv {
    let xs = xs.to_vec();
    OracleEnv::new().with("a", move |_, ys| f(&xs, &ys[0]))
}

fn passed(f: impl Fn(&[Value], &Value) -> Value + 'static) -> OracleEnv {
    OracleEnv::new().with("a*", move |xs, ys| f(xs, &ys[0]))
}

fn check_passing(g: &ProofGraph, f: fn(&[Value], &Value) -> Value, inputs: &[(&[u64], &[u64])]) {
    validate_graph(g, WITH_ORACLES).unwrap();
    let d = pass_parameters(g, "a", "a*").unwrap();
    validate_graph(&d, WITH_ORACLES).unwrap();
    assert_eq!(classify(g).class, classify(&d).class);
    let k = g.root_node().seq.boxed;
    for (xs, ys) in inputs {
        let (xs, ys) = (vals(xs), vals(ys));
        for (_, n) in &d.nodes {
            if let Rule::Oracle(a) = &n.rule {
                assert_eq!(a, "a*");
                assert_eq!(n.seq.boxed, k);
            }
        }
        let env0 = with_normals(&xs, f);
        let want = ProofEval::new(g, &env0, EvalConfig::default()).eval(g.root, &xs, &ys);
        let env1 = passed(f);
        let got = ProofEval::new(&d, &env1, EvalConfig::default()).eval(d.root, &xs, &ys);
        assert_eq!(want, got);
    }
}

#[test]
fn passing_parameters_to_nested_calls() {
    // a(; a(; y)) over one normal input
    let g = parse_proof(
        "proof h root 0\n\
         node 0 : cutN seq bN, N => N premises [1, 3]\n\
         node 1 : wB seq bN, N => N premises [2]\n\
         node 2 : oracle(a) seq N => N premises []\n\
         node 3 : wB seq bN, N, N => N premises [4]\n\
         node 4 : eN(0) seq N, N => N premises [5]\n\
         node 5 : wN seq N, N => N premises [6]\n\
         node 6 : oracle(a) seq N => N premises []\n",
    )
    .unwrap();
    fn f(xs: &[Value], z: &Value) -> Value {
        &xs[0] * 3u32 + z * 2u32 + 1u32
    }
    check_passing(&g, f, &[(&[0], &[0]), (&[4], &[1]), (&[7], &[9])]);
}

#[test]
fn passed_inputs_keep_root_order() {
    let g = parse_proof(
        "proof h root 0\n\
         node 0 : eB(0) seq bN, bN, N => N premises [1]\n\
         node 1 : wB seq bN, bN, N => N premises [2]\n\
         node 2 : wB seq bN, N => N premises [3]\n\
         node 3 : oracle(a) seq N => N premises []\n",
    )
    .unwrap();
    fn f(xs: &[Value], z: &Value) -> Value {
        &xs[0] * 100u32 + &xs[1] * 10u32 + z
    }
    check_passing(&g, f, &[(&[1, 2], &[3]), (&[4, 0], &[7])]);
}

#[test]
fn passing_leaves_other_subproofs_alone() {
    // cond(; y, a(; y), x, x) with the scrutinee read from the normal input
    let g = parse_proof(
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
    )
    .unwrap();
    fn f(xs: &[Value], z: &Value) -> Value {
        &xs[0] + z * 5u32
    }
    check_passing(&g, f, &[(&[2], &[0]), (&[2], &[3]), (&[6], &[4])]);
}

#[test]
fn passing_shape_violations() {
    let bad = [
        // boxed cut on the way to the oracle
        "proof h root 0\n\
         node 0 : cutB seq bN => N premises [1, 2]\n\
         node 1 : boxR seq bN => bN premises [3]\n\
         node 3 : boxL seq bN => N premises [4]\n\
         node 4 : id seq N => N premises []\n\
         node 2 : wB seq bN, bN => N premises [5]\n\
         node 5 : wB seq bN => N premises [6]\n\
         node 6 : oracle(a) seq => N premises []\n",
        // branching on a passed input
        "proof h root 0\n\
         node 0 : condB seq bN => N premises [1, 2, 2]\n\
         node 1 : zero seq => N premises []\n\
         node 2 : wB seq bN => N premises [3]\n\
         node 3 : oracle(a) seq => N premises []\n",
        // a passed input moved into the safe zone
        "proof h root 0\n\
         node 0 : boxL seq bN => N premises [1]\n\
         node 1 : oracle(a) seq N => N premises []\n",
    ];
    for src in bad {
        let g = parse_proof(src).unwrap();
        validate_graph(&g, WITH_ORACLES).unwrap();
        assert!(matches!(pass_parameters(&g, "a", "a*"), Err(TransformError::ShapeViolation(_))), "{src}");
    }
}

/// Block of `k` functions: f_i(0; y) = s_{i mod 2}(y), otherwise
/// f_i(x; y) = f_{i+1}(x/2; step(y)).
fn chain_block(k: usize, family: Family, select: usize) -> T {
    let x = Term::normal(1, 1, 0);
    let y = Term::safe(1, 1, 0);
    let px = Term::app(1, 0, Term::pred(), vec![Term::normal(1, 0, 0)]);
    let defs = (0..k)
        .map(|i| {
            let base = Term::app(1, 1, if i % 2 == 0 { Term::s0() } else { Term::s1() }, vec![y.clone()]);
            let step = match family {
                Family::Normals => Term::app(1, 1, if i % 2 == 0 { Term::s1() } else { Term::s0() }, vec![y.clone()]),
                Family::NormalsAndSafes => Term::app(1, 1, Term::pred(), vec![y.clone()]),
            };
            let call = Term::comp(1, 1, Term::gcall(format!("f{}", (i + 1) % k), 1, 1), vec![px.clone()], vec![step]);
            (format!("f{i}"), Term::app(1, 1, Term::cond(), vec![x.clone(), base, call.clone(), call]))
        })
        .collect();
    std::rc::Rc::new(Term::Fix {
        family,
        m: 1,
        n: 1,
        defs,
        select,
    })
}

fn chain_reference(k: usize, family: Family, i: usize, x: u64, y: u64) -> u64 {
    if x == 0 {
        return 2 * y + (i % 2) as u64;
    }
    let y = match family {
        Family::Normals => 2 * y + ((i + 1) % 2) as u64,
        Family::NormalsAndSafes => y / 2,
    };
    chain_reference(k, family, (i + 1) % k, x / 2, y)
}

#[test]
fn flattening_simultaneous_blocks() {
    let env = OracleEnv::new();
    for family in [Family::Normals, Family::NormalsAndSafes] {
        for k in 1..=3 {
            let block = chain_block(k, family, 0);
            let flat = reduce_simultaneous(&block, "g").unwrap();
            let Term::Fix { defs, n, .. } = &*flat.flat else { panic!() };
            assert_eq!(defs.len(), 1);
            assert_eq!(*n, 1 + k);
            assert_eq!(flat.selectors.len(), k);
            for (i, sel) in flat.selectors.iter().enumerate() {
                let orig = chain_block(k, family, i);
                for x in 0..12u64 {
                    for y in 0..5u64 {
                        let want = eval_term(&orig, &env, &[v(x)], &[v(y)]).unwrap();
                        assert_eq!(want, v(chain_reference(k, family, i, x, y)), "{family:?} k={k} f{i}({x};{y})");
                        assert_eq!(eval_term(sel, &env, &[v(x)], &[v(y)]), Ok(want), "{family:?} k={k} f{i}({x};{y})");
                    }
                }
                for class in TermClass::ALL {
                    assert_eq!(
                        check_term_class(&orig, class).is_ok(),
                        check_term_class(sel, class).is_ok(),
                        "{class} {family:?} k={k}"
                    );
                }
            }
            // an unknown tag tuple selects nothing
            let mut ys = vec![v(3)];
            ys.extend((0..k).map(|_| v(9)));
            assert_eq!(eval_term(&flat.flat, &env, &[v(5)], &ys), Ok(v(0)));
        }
    }
}

#[test]
fn flattening_needs_a_block() {
    assert!(reduce_simultaneous(&Term::zero(), "g").is_err());
    let tags: BTreeSet<Vec<u64>> = (0..4).map(|i| cbc_transform::rotation_tag(i, 4)).collect();
    assert_eq!(tags.len(), 4);
}

#[test]
fn promotion_avoids_plain_rules() {
    for name in ["S", "I", "C", "E", "P", "Pcut", "L", "N", "Eprime"] {
        let p = box_promote(&load(name)).unwrap();
        assert!(
            !p.contains_rule(|r| matches!(r, Rule::CutN | Rule::CondN | Rule::WeakN | Rule::ExchN(_))),
            "{name}"
        );
    }
    let id = parse_proof("proof id root 0\nnode 0 : id seq N => N premises []\n").unwrap();
    let p = box_promote(&id).unwrap();
    assert_eq!(p.len(), 2);
    assert_eq!(p.root_node().rule, Rule::BoxL);
}

#[test]
fn passing_through_a_single_weakening() {
    let g = parse_proof(
        "proof h root 0\n\
         node 0 : wB seq bN, N => N premises [1]\n\
         node 1 : oracle(a) seq N => N premises []\n",
    )
    .unwrap();
    let d = pass_parameters(&g, "a", "a*").unwrap();
    assert_eq!(d.len(), 1);
    assert_eq!(d.root_node().rule, Rule::Oracle("a*".into()));
    assert_eq!(d.root_node().seq, g.root_node().seq);
}
