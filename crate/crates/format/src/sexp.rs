use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, usize, usize),
    List(Vec<Sexp>, usize, usize),
}

impl Sexp {
    pub fn pos(&self) -> (usize, usize) {
        match self {
            Sexp::Atom(_, l, c) | Sexp::List(_, l, c) => (*l, *c),
        }
    }

    pub fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (l, c) = self.pos();
        Err(ParseError::new(l, c, msg))
    }
}

/// Reads every top-level expression. `;` and `#` start comments.
pub fn read_all(text: &str) -> Result<Vec<Sexp>, ParseError> {
    let mut stack: Vec<(Vec<Sexp>, usize, usize)> = vec![(Vec::new(), 0, 0)];
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let chars: Vec<char> = raw.chars().collect();
        let mut j = 0;
        while j < chars.len() {
            let c = chars[j];
            let col = j + 1;
            match c {
                ';' | '#' => break,
                '(' => {
                    stack.push((Vec::new(), ln, col));
                    j += 1;
                }
                ')' => {
                    if stack.len() == 1 {
                        return Err(ParseError::new(ln, col, "unbalanced `)`"));
                    }
                    let (items, l, c0) = stack.pop().unwrap();
                    stack.last_mut().unwrap().0.push(Sexp::List(items, l, c0));
                    j += 1;
                }
                c if c.is_whitespace() => j += 1,
                _ => {
                    let start = j;
                    while j < chars.len() && !chars[j].is_whitespace() && !matches!(chars[j], '(' | ')' | ';' | '#') {
                        j += 1;
                    }
                    let atom: String = chars[start..j].iter().collect();
                    stack.last_mut().unwrap().0.push(Sexp::Atom(atom, ln, col));
                }
            }
        }
    }
    if stack.len() > 1 {
        let (_, l, c) = stack.pop().unwrap();
        return Err(ParseError::new(l, c, "unclosed `(`"));
    }
    Ok(stack.pop().unwrap().0)
}
