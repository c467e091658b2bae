use super::ast::{BinOp, CmpOp, Expr, Pred};
use super::lexer::{tokenize, Spanned, Tok};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("syntax error at {line}:{col}: {msg}")]
pub struct SyntaxError {
    pub line: u32,
    pub col: u32,
    pub msg: String,
}

impl SyntaxError {
    pub fn new(line: u32, col: u32, msg: impl Into<String>) -> SyntaxError {
        SyntaxError { line, col, msg: msg.into() }
    }
}

/// Parses the concrete syntax.
///
/// Precedence, lowest first: `<=>`, `=>`, `or`, `&`, comparisons, `+ -`,
/// `* / mod`, unary minus. `exists(x, P)`, `forall(x, P)` and `not(P)` are
/// function-style; `x in a..b` is interval membership.
pub fn parse(text: &str) -> Result<Pred, SyntaxError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0 };
    let pred = p.pred()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(pred)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (u32, u32) {
        let s = &self.toks[self.pos];
        (s.line, s.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> SyntaxError {
        let (line, col) = self.here();
        SyntaxError::new(line, col, msg)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected {what}, found {:?}", self.peek())))
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.err(format!("expected identifier, found {other:?}"))),
        }
    }

    fn pred(&mut self) -> Result<Pred, SyntaxError> {
        let mut lhs = self.impl_()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.impl_()?;
            lhs = Pred::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn impl_(&mut self) -> Result<Pred, SyntaxError> {
        let mut lhs = self.disj()?;
        while *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.disj()?;
            lhs = Pred::Implies(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Pred, SyntaxError> {
        let mut lhs = self.conj()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conj()?;
            lhs = Pred::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Pred, SyntaxError> {
        let mut lhs = self.atom()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.atom()?;
            lhs = Pred::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<Pred, SyntaxError> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(Pred::True)
            }
            Tok::False => {
                self.bump();
                Ok(Pred::False)
            }
            Tok::Not => {
                self.bump();
                self.expect(Tok::LParen, "'('")?;
                let inner = self.pred()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Pred::Not(Box::new(inner)))
            }
            Tok::Exists | Tok::Forall => {
                let is_exists = *self.peek() == Tok::Exists;
                self.bump();
                self.expect(Tok::LParen, "'('")?;
                let var = self.ident()?;
                self.expect(Tok::Comma, "','")?;
                let body = self.pred()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(if is_exists {
                    Pred::Exists(var, Box::new(body))
                } else {
                    Pred::Forall(var, Box::new(body))
                })
            }
            _ => {
                // `expr relop expr`, `ident in a..b`, or `( pred )`:
                // try the expression route first, backtrack on failure.
                let save = self.pos;
                match self.cmp_or_in() {
                    Ok(p) => Ok(p),
                    Err(e) => {
                        self.pos = save;
                        if *self.peek() == Tok::LParen {
                            self.bump();
                            let inner = self.pred()?;
                            self.expect(Tok::RParen, "')'")?;
                            Ok(inner)
                        } else {
                            Err(e)
                        }
                    }
                }
            }
        }
    }

    fn cmp_or_in(&mut self) -> Result<Pred, SyntaxError> {
        let lhs = self.expr()?;
        if *self.peek() == Tok::In {
            let var = match lhs {
                Expr::Var(v) => v,
                _ => return Err(self.err("'in' requires a variable on the left")),
            };
            self.bump();
            let lo = self.expr()?;
            self.expect(Tok::DotDot, "'..'")?;
            let hi = self.expr()?;
            return Ok(Pred::In(var, lo, hi));
        }
        let op = match self.peek() {
            Tok::Eq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            Tok::Lt => CmpOp::Lt,
            Tok::Gt => CmpOp::Gt,
            Tok::Le => CmpOp::Le,
            Tok::Ge => CmpOp::Ge,
            _ => return Err(self.err("expected comparison operator")),
        };
        self.bump();
        let rhs = self.expr()?;
        Ok(Pred::Cmp(op, lhs, rhs))
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                Tok::Mod => BinOp::Mod,
                _ => break,
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Expr::Int(v))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Expr::Var(name))
            }
            Tok::Minus => {
                self.bump();
                let inner = self.factor()?;
                // fold a negated literal into the literal itself
                Ok(match inner {
                    Expr::Int(v) if v != i64::MIN => Expr::Int(-v),
                    other => Expr::Neg(Box::new(other)),
                })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            other => Err(self.err(format!("expected expression, found {other:?}"))),
        }
    }
}
