use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SType {
    Plain,
    Boxed,
}

impl fmt::Display for SType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SType::Plain => write!(f, "N"),
            SType::Boxed => write!(f, "bN"),
        }
    }
}

/// `boxed` copies of the boxed type followed by `plain` copies of the plain
/// type, entailing `succ`. Boxed position `i` is normal input `i`, plain
/// position `j` is safe input `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub boxed: usize,
    pub plain: usize,
    pub succ: SType,
}

impl Sequent {
    pub const fn new(boxed: usize, plain: usize, succ: SType) -> Self {
        Sequent { boxed, plain, succ }
    }

    pub const fn n(boxed: usize, plain: usize) -> Self {
        Sequent::new(boxed, plain, SType::Plain)
    }

    pub const fn b(boxed: usize, plain: usize) -> Self {
        Sequent::new(boxed, plain, SType::Boxed)
    }

    pub fn with_succ(self, succ: SType) -> Self {
        Sequent { succ, ..self }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx: Vec<&str> = std::iter::repeat_n("bN", self.boxed)
            .chain(std::iter::repeat_n("N", self.plain))
            .collect();
        if ctx.is_empty() {
            write!(f, "=> {}", self.succ)
        } else {
            write!(f, "{} => {}", ctx.join(", "), self.succ)
        }
    }
}
