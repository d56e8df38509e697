use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Bot,
    Top,
    Next,
    Ev,
    Hence,
    Not,
    CoNot,
    And,
    Or,
    Imp,
    Coimp,
    Iff,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Bot => "`bot`".into(),
            Tok::Top => "`top`".into(),
            Tok::Next => "`X`".into(),
            Tok::Ev => "`F`".into(),
            Tok::Hence => "`G`".into(),
            Tok::Not => "`!`".into(),
            Tok::CoNot => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Imp => "`=>`".into(),
            Tok::Coimp => "`<=`".into(),
            Tok::Iff => "`<=>`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (start_line, start_col) = (line, col);
        let rest = &chars[i..];
        let starts = |s: &str| rest.len() >= s.len() && s.chars().zip(rest).all(|(a, b)| a == *b);
        let (tok, width) = if starts("<=>") {
            (Tok::Iff, 3)
        } else if starts("<=") {
            (Tok::Coimp, 2)
        } else if starts("=>") {
            (Tok::Imp, 2)
        } else {
            match c {
                '&' => (Tok::And, 1),
                '|' => (Tok::Or, 1),
                '!' => (Tok::Not, 1),
                '~' => (Tok::CoNot, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                'X' => (Tok::Next, 1),
                'F' => (Tok::Ev, 1),
                'G' => (Tok::Hence, 1),
                'a'..='z' => {
                    let mut j = i;
                    while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                        j += 1;
                    }
                    let word: String = chars[i..j].iter().collect();
                    let tok = match word.as_str() {
                        "bot" => Tok::Bot,
                        "top" => Tok::Top,
                        _ => Tok::Ident(word),
                    };
                    (tok, j - i)
                }
                _ => {
                    return Err(ParseError {
                        line: start_line,
                        column: start_col,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            }
        };
        out.push(Spanned { tok, line: start_line, column: start_col });
        i += width;
        col += width;
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let at = &self.toks[self.pos];
        ParseError { line: at.line, column: at.column, message: message.into() }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {}, found {}", tok.describe(), self.peek().describe())))
        }
    }

    /// The loosest level: `=>` (right), `<=` (left) and `<=>`, never mixed.
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let first = self.disjunction()?;
        let op = match self.peek() {
            Tok::Imp | Tok::Coimp | Tok::Iff => self.peek().clone(),
            _ => return Ok(first),
        };
        let mut operands = vec![first];
        while matches!(self.peek(), Tok::Imp | Tok::Coimp | Tok::Iff) {
            if *self.peek() != op {
                return Err(self.error(format!(
                    "{} cannot follow {} without parentheses",
                    self.peek().describe(),
                    op.describe()
                )));
            }
            if op == Tok::Iff && operands.len() == 2 {
                return Err(self.error("`<=>` does not chain; add parentheses"));
            }
            self.bump();
            operands.push(self.disjunction()?);
        }
        Ok(match op {
            Tok::Imp => {
                let mut it = operands.into_iter().rev();
                let last = it.next().expect("at least two operands");
                it.fold(last, |acc, f| Formula::imp(f, acc))
            }
            Tok::Coimp => {
                let mut it = operands.into_iter();
                let first = it.next().expect("at least two operands");
                it.fold(first, Formula::coimp)
            }
            _ => {
                let mut it = operands.into_iter();
                let a = it.next().expect("lhs");
                let b = it.next().expect("rhs");
                Formula::iff(a, b)
            }
        })
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Next => {
                self.bump();
                Ok(Formula::next(self.unary()?))
            }
            Tok::Ev => {
                self.bump();
                Ok(Formula::ev(self.unary()?))
            }
            Tok::Hence => {
                self.bump();
                Ok(Formula::hence(self.unary()?))
            }
            Tok::Not => {
                self.bump();
                Ok(Formula::neg(self.unary()?))
            }
            Tok::CoNot => {
                self.bump();
                Ok(Formula::coneg(self.unary()?))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Tok::Bot => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::Top => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => Err(self.error(format!("expected a formula, found {}", other.describe()))),
        }
    }
}

/// Parses the ASCII concrete syntax, expanding `!`, `~` and `<=>`.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser { toks: lex(text)?, pos: 0 };
    let f = parser.formula()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.error(format!("unexpected {}", parser.peek().describe())));
    }
    Ok(f)
}
