use crate::error::ParseError;
use cbc_kernel::{Node, NodeId, ProofGraph, Rule, SType, Sequent};
use std::fmt::Write;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Punct(&'static str),
}

#[derive(Debug, Clone)]
struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex_line(line: &str, ln: usize) -> Result<Vec<Lexed>, ParseError> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let punct = match c {
            ':' => Some(":"),
            '(' => Some("("),
            ')' => Some(")"),
            '[' => Some("["),
            ']' => Some("]"),
            ',' => Some(","),
            _ => None,
        };
        if let Some(p) = punct {
            out.push(Lexed {
                tok: Tok::Punct(p),
                line: ln,
                col,
            });
            i += 1;
        } else if c == '=' && chars.get(i + 1) == Some(&'>') {
            out.push(Lexed {
                tok: Tok::Punct("=>"),
                line: ln,
                col,
            });
            i += 2;
        } else if c.is_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || matches!(chars[i], '_' | '\'' | '.' | '-')) {
                i += 1;
            }
            out.push(Lexed {
                tok: Tok::Word(chars[start..i].iter().collect()),
                line: ln,
                col,
            });
        } else {
            return Err(ParseError::new(ln, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<Lexed>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Cursor {
    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map_or((self.line, self.end_col), |t| (t.line, t.col))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (l, c) = self.here();
        Err(ParseError::new(l, c, msg))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn word(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Word(w)) if w == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected `{kw}`")),
        }
    }

    fn punct(&mut self, p: &str) -> Result<(), ParseError> {
        if self.eat(p) {
            Ok(())
        } else {
            self.err(format!("expected `{p}`"))
        }
    }

    fn eat(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Punct(q)) if *q == p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number<N: std::str::FromStr>(&mut self, what: &str) -> Result<N, ParseError> {
        let save = self.pos;
        let w = self.word(what)?;
        w.parse().or_else(|_| {
            self.pos = save;
            self.err(format!("expected {what}, found `{w}`"))
        })
    }

    fn done(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            self.err("trailing input")
        } else {
            Ok(())
        }
    }
}

fn parse_rule(c: &mut Cursor) -> Result<Rule, ParseError> {
    let save = c.pos;
    let name = c.word("rule name")?;
    let param = |c: &mut Cursor| -> Result<usize, ParseError> {
        c.punct("(")?;
        let n = c.number("position")?;
        c.punct(")")?;
        Ok(n)
    };
    let rule = match name.as_str() {
        "id" => Rule::Id,
        "zero" | "0" => Rule::Zero,
        "s0" => Rule::S0,
        "s1" => Rule::S1,
        "wN" => Rule::WeakN,
        "wB" => Rule::WeakBox,
        "eN" => Rule::ExchN(param(c)?),
        "eB" => Rule::ExchBox(param(c)?),
        "boxL" => Rule::BoxL,
        "boxR" => Rule::BoxR,
        "cutN" => Rule::CutN,
        "cutB" => Rule::CutBox,
        "condN" => Rule::CondN,
        "condB" => Rule::CondBox,
        "srec" => Rule::SRec,
        "dis" => Rule::Dis(param(c)? as NodeId),
        "oracle" => {
            if c.eat("(") {
                let a = c.word("oracle name")?;
                c.punct(")")?;
                Rule::Oracle(a)
            } else {
                c.keyword("oracle")?;
                Rule::Oracle(c.word("oracle name")?)
            }
        }
        other => {
            c.pos = save;
            return c.err(format!("unknown rule `{other}`"));
        }
    };
    Ok(rule)
}

fn parse_stype(c: &mut Cursor) -> Result<SType, ParseError> {
    let save = c.pos;
    match c.word("type")?.as_str() {
        "N" => Ok(SType::Plain),
        "bN" => Ok(SType::Boxed),
        other => {
            c.pos = save;
            c.err(format!("unknown type `{other}`"))
        }
    }
}

fn parse_sequent(c: &mut Cursor) -> Result<Sequent, ParseError> {
    c.keyword("seq")?;
    let (mut boxed, mut plain) = (0, 0);
    if !c.eat("=>") {
        loop {
            let save = c.pos;
            match parse_stype(c)? {
                SType::Boxed if plain > 0 => {
                    c.pos = save;
                    return c.err("boxed `bN` after a plain `N`: boxed inputs come first");
                }
                SType::Boxed => boxed += 1,
                SType::Plain => plain += 1,
            }
            if c.eat("=>") {
                break;
            }
            c.punct(",")?;
        }
    }
    let succ = parse_stype(c)?;
    Ok(Sequent::new(boxed, plain, succ))
}

/// Parses a proof document. Checks syntax, duplicate ids and that every
/// premise id is declared; rule schemas are left to validation.
pub fn parse_proof(text: &str) -> Result<ProofGraph, ParseError> {
    let mut graph: Option<ProofGraph> = None;
    let mut root_pos = (0, 0);
    let mut refs: Vec<(NodeId, usize, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let toks = lex_line(raw, ln)?;
        if toks.is_empty() {
            continue;
        }
        let mut c = Cursor {
            toks,
            pos: 0,
            line: ln,
            end_col: raw.len() + 1,
        };
        let head = c.word("`proof` or `node`")?;
        match (head.as_str(), &mut graph) {
            ("proof", None) => {
                let name = c.word("proof name")?;
                c.keyword("root")?;
                root_pos = c.here();
                let root = c.number("root id")?;
                c.done()?;
                let mut g = ProofGraph::new(name);
                g.root = root;
                graph = Some(g);
            }
            ("proof", Some(_)) => {
                c.pos = 0;
                return c.err("second `proof` header");
            }
            ("node", None) => {
                c.pos = 0;
                return c.err("`node` before the `proof` header");
            }
            ("node", Some(g)) => {
                let id_pos = c.here();
                let id: NodeId = c.number("node id")?;
                if g.nodes.contains_key(&id) {
                    return Err(ParseError::new(id_pos.0, id_pos.1, format!("duplicate node id {id}")));
                }
                c.punct(":")?;
                let rule = parse_rule(&mut c)?;
                let seq = parse_sequent(&mut c)?;
                c.keyword("premises")?;
                c.punct("[")?;
                let mut premises = Vec::new();
                if !c.eat("]") {
                    loop {
                        let (l, col) = c.here();
                        let p: NodeId = c.number("premise id")?;
                        refs.push((p, l, col));
                        premises.push(p);
                        if c.eat("]") {
                            break;
                        }
                        c.punct(",")?;
                    }
                }
                c.done()?;
                if let Rule::Dis(comp) = rule {
                    refs.push((comp, id_pos.0, id_pos.1));
                }
                g.insert(id, Node::new(rule, seq, premises));
            }
            (other, _) => {
                c.pos = 0;
                return c.err(format!("expected `proof` or `node`, found `{other}`"));
            }
        }
    }
    let g = graph.ok_or_else(|| ParseError::new(1, 1, "missing `proof` header"))?;
    for (p, l, col) in refs {
        if !g.nodes.contains_key(&p) {
            return Err(ParseError::new(l, col, format!("undeclared node id {p}")));
        }
    }
    if !g.nodes.contains_key(&g.root) {
        return Err(ParseError::new(root_pos.0, root_pos.1, format!("root {} is not declared", g.root)));
    }
    Ok(g)
}

pub(crate) fn sequent_literal(s: &Sequent) -> String {
    let ctx: Vec<&str> = std::iter::repeat_n("bN", s.boxed)
        .chain(std::iter::repeat_n("N", s.plain))
        .collect();
    if ctx.is_empty() {
        format!("=> {}", s.succ)
    } else {
        format!("{} => {}", ctx.join(", "), s.succ)
    }
}

pub(crate) fn rule_literal(r: &Rule) -> String {
    match r {
        Rule::Oracle(a) => format!("oracle oracle {a}"),
        r => r.to_string(),
    }
}

/// Renders a graph with node records sorted by id.
pub fn serialize_proof(g: &ProofGraph) -> String {
    let mut out = String::new();
    writeln!(out, "proof {} root {}", g.name, g.root).unwrap();
    for (id, n) in &g.nodes {
        let prem: Vec<String> = n.premises.iter().map(|p| p.to_string()).collect();
        writeln!(
            out,
            "node {id} : {} seq {} premises [{}]",
            rule_literal(&n.rule),
            sequent_literal(&n.seq),
            prem.join(", ")
        )
        .unwrap();
    }
    out
}
