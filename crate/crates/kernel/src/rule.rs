use crate::graph::NodeId;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Id,
    Zero,
    S0,
    S1,
    WeakN,
    WeakBox,
    /// Swap plain positions `pos` and `pos + 1`.
    ExchN(usize),
    /// Swap boxed positions `pos` and `pos + 1`.
    ExchBox(usize),
    BoxL,
    BoxR,
    CutN,
    CutBox,
    CondN,
    CondBox,
    SRec,
    Oracle(String),
    /// A bud of a cycle normal form, pointing at its companion.
    Dis(NodeId),
}

impl Rule {
    pub fn premise_count(&self) -> usize {
        match self {
            Rule::Id | Rule::Zero | Rule::Oracle(_) | Rule::Dis(_) => 0,
            Rule::S0
            | Rule::S1
            | Rule::WeakN
            | Rule::WeakBox
            | Rule::ExchN(_)
            | Rule::ExchBox(_)
            | Rule::BoxL
            | Rule::BoxR => 1,
            Rule::CutN | Rule::CutBox => 2,
            Rule::CondN | Rule::CondBox | Rule::SRec => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Rule::Id => "id",
            Rule::Zero => "zero",
            Rule::S0 => "s0",
            Rule::S1 => "s1",
            Rule::WeakN => "wN",
            Rule::WeakBox => "wB",
            Rule::ExchN(_) => "eN",
            Rule::ExchBox(_) => "eB",
            Rule::BoxL => "boxL",
            Rule::BoxR => "boxR",
            Rule::CutN => "cutN",
            Rule::CutBox => "cutB",
            Rule::CondN => "condN",
            Rule::CondBox => "condB",
            Rule::SRec => "srec",
            Rule::Oracle(_) => "oracle",
            Rule::Dis(_) => "dis",
        }
    }

    pub fn is_axiom(&self) -> bool {
        matches!(self, Rule::Id | Rule::Zero | Rule::Oracle(_))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::ExchN(p) | Rule::ExchBox(p) => write!(f, "{}({})", self.name(), p),
            Rule::Oracle(a) => write!(f, "oracle({a})"),
            Rule::Dis(c) => write!(f, "dis({c})"),
            _ => write!(f, "{}", self.name()),
        }
    }
}
