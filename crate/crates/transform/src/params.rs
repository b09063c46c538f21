use crate::build::Builder;
use crate::TransformError;
use cbc_kernel::{NodeId, ProofGraph, Rule, Sequent};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Where a root normal input currently sits: at a boxed position of the
/// node, or carried as an extra input in front of the boxed zone after the
/// original proof weakened it away.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Pos {
    Real(usize),
    Ghost,
}

type State = Vec<Pos>;

/// Rewrites a proof whose `oracle` leaves see only safe inputs into one
/// whose `new_name` leaves additionally receive the root's normal inputs,
/// in order, as boxed inputs. If the original oracle is `a(x; -)` with `x`
/// the root normals, the result with `new_name` read as `a` computes the
/// same function.
pub fn pass_parameters(g: &ProofGraph, oracle: &str, new_name: &str) -> Result<ProofGraph, TransformError> {
    let k = g.root_node().seq.boxed;
    let reaches = reaching(g, oracle);
    let mut st = Pass {
        g,
        oracle,
        new_name,
        k,
        reaches,
        b: Builder::extend(g.clone()),
        done: BTreeMap::new(),
    };
    let start: State = (0..k).map(Pos::Real).collect();
    let r = st.go(g.root, start)?;
    let mut out = st.b.finish(r);
    out.name = format!("{}_pp", g.name);
    Ok(out)
}

fn reaching(g: &ProofGraph, oracle: &str) -> BTreeSet<NodeId> {
    let mut rev: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut seen = BTreeSet::new();
    for id in g.reachable() {
        let n = g.node(id);
        for p in &n.premises {
            rev.entry(*p).or_default().push(id);
        }
        if matches!(&n.rule, Rule::Oracle(a) if a == oracle) {
            seen.insert(id);
            queue.push_back(id);
        }
    }
    while let Some(n) = queue.pop_front() {
        for p in rev.get(&n).into_iter().flatten() {
            if seen.insert(*p) {
                queue.push_back(*p);
            }
        }
    }
    seen
}

struct Pass<'a> {
    g: &'a ProofGraph,
    oracle: &'a str,
    new_name: &'a str,
    k: usize,
    reaches: BTreeSet<NodeId>,
    b: Builder,
    done: BTreeMap<(NodeId, State), NodeId>,
}

fn ghosts(s: &State) -> usize {
    s.iter().filter(|p| **p == Pos::Ghost).count()
}

fn shift_down(s: &State) -> State {
    s.iter()
        .map(|p| match p {
            Pos::Real(j) => Pos::Real(j - 1),
            Pos::Ghost => Pos::Ghost,
        })
        .collect()
}

impl Pass<'_> {
    fn violation(&self, id: NodeId, what: &str) -> TransformError {
        TransformError::ShapeViolation(format!("{what} at node {id} on a path to oracle {}", self.oracle))
    }

    fn go(&mut self, id: NodeId, st: State) -> Result<NodeId, TransformError> {
        if let Some(&d) = self.done.get(&(id, st.clone())) {
            return Ok(d);
        }
        let g = ghosts(&st);
        if !self.reaches.contains(&id) {
            let r = self.b.weaken_front(g, id);
            self.done.insert((id, st), r);
            return Ok(r);
        }
        let node = self.g.node(id).clone();
        let s = node.seq;
        let out = Sequent::new(g + s.boxed, s.plain, s.succ);
        let me = self.b.reserve();
        self.done.insert((id, st.clone()), me);
        let p = &node.premises;
        let tracked = |i: usize| st.contains(&Pos::Real(i));
        let safes: Vec<usize> = (0..s.plain).collect();
        // conclusion positions with boxed position `g` moved to the front
        let lead: Vec<usize> = [g].into_iter().chain(0..g).chain(g + 1..g + s.boxed).collect();

        match &node.rule {
            Rule::Oracle(a) if a == self.oracle => {
                if s.boxed != 0 || g != self.k {
                    return Err(self.violation(id, "oracle leaf with boxed inputs"));
                }
                self.b.set(me, Rule::Oracle(self.new_name.to_string()), out, vec![]);
            }
            Rule::S0 | Rule::S1 | Rule::WeakN | Rule::ExchN(_) | Rule::BoxR => {
                let q = self.go(p[0], st.clone())?;
                self.b.set(me, node.rule.clone(), out, vec![q]);
            }
            Rule::CutN | Rule::CondN => {
                let mut qs = Vec::new();
                for x in p {
                    qs.push(self.go(*x, st.clone())?);
                }
                self.b.set(me, node.rule.clone(), out, qs);
            }
            Rule::ExchBox(i) => {
                let next: State = st
                    .iter()
                    .map(|q| match q {
                        Pos::Real(j) if j == i => Pos::Real(i + 1),
                        Pos::Real(j) if *j == i + 1 => Pos::Real(*i),
                        q => *q,
                    })
                    .collect();
                let q = self.go(p[0], next)?;
                self.b.set(me, Rule::ExchBox(g + i), out, vec![q]);
            }
            Rule::WeakBox => {
                if tracked(0) {
                    let next: State = st
                        .iter()
                        .map(|q| match q {
                            Pos::Real(0) | Pos::Ghost => Pos::Ghost,
                            Pos::Real(j) => Pos::Real(j - 1),
                        })
                        .collect();
                    // premise ghosts in thread order, drawn from current
                    // ghosts or from boxed position `g`
                    let mut nmap = Vec::new();
                    let mut seen = 0;
                    for o in &st {
                        match o {
                            Pos::Ghost => {
                                nmap.push(seen);
                                seen += 1;
                            }
                            Pos::Real(0) => nmap.push(g),
                            _ => {}
                        }
                    }
                    nmap.extend(g + 1..g + s.boxed);
                    let q = self.go(p[0], next)?;
                    let r = self.b.restructure(out, &nmap, &safes, q);
                    self.b.alias(me, r);
                } else {
                    let q = self.go(p[0], shift_down(&st))?;
                    let nmap: Vec<usize> = (0..g).chain(g + 1..g + s.boxed).collect();
                    let r = self.b.restructure(out, &nmap, &safes, q);
                    self.b.alias(me, r);
                }
            }
            Rule::BoxL => {
                if tracked(0) {
                    return Err(self.violation(id, "boxL on a passed input"));
                }
                let q = self.go(p[0], shift_down(&st))?;
                let l = self.b.add(Rule::BoxL, out, vec![q]);
                let r = self.b.restructure(out, &lead, &safes, l);
                self.b.alias(me, r);
            }
            Rule::CondBox => {
                if self.reaches.contains(&p[0]) {
                    return Err(self.violation(id, "leftmost condB premise"));
                }
                if tracked(0) {
                    return Err(self.violation(id, "condB on a passed input"));
                }
                let q0 = self.go(p[0], shift_down(&st))?;
                let back: Vec<usize> = (1..=g).chain([0]).chain(g + 1..g + s.boxed).collect();
                let q1 = self.go(p[1], st.clone())?;
                let q1 = self.b.restructure(out, &back, &safes, q1);
                let q2 = self.go(p[2], st.clone())?;
                let q2 = self.b.restructure(out, &back, &safes, q2);
                let c = self.b.add(Rule::CondBox, out, vec![q0, q1, q2]);
                let r = self.b.restructure(out, &lead, &safes, c);
                self.b.alias(me, r);
            }
            r => return Err(self.violation(id, &r.to_string())),
        }
        Ok(me)
    }
}
