use std::fmt;

/// Boolean expression over the declared variables, referenced by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    Const(bool),
    Var(usize),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
    Xor(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn negate(e: BoolExpr) -> BoolExpr {
        BoolExpr::Not(Box::new(e))
    }

    pub fn and(a: BoolExpr, b: BoolExpr) -> BoolExpr {
        BoolExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: BoolExpr, b: BoolExpr) -> BoolExpr {
        BoolExpr::Or(Box::new(a), Box::new(b))
    }

    pub fn xor(a: BoolExpr, b: BoolExpr) -> BoolExpr {
        BoolExpr::Xor(Box::new(a), Box::new(b))
    }

    /// Evaluates with `value(i)` supplying variable `i`.
    pub fn eval<F: Fn(usize) -> bool + Copy>(&self, value: F) -> bool {
        match self {
            BoolExpr::Const(b) => *b,
            BoolExpr::Var(i) => value(*i),
            BoolExpr::Not(e) => !e.eval(value),
            BoolExpr::And(a, b) => a.eval(value) && b.eval(value),
            BoolExpr::Or(a, b) => a.eval(value) || b.eval(value),
            BoolExpr::Xor(a, b) => a.eval(value) ^ b.eval(value),
        }
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            BoolExpr::Const(_) => None,
            BoolExpr::Var(i) => Some(*i),
            BoolExpr::Not(e) => e.max_var(),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) | BoolExpr::Xor(a, b) => {
                a.max_var().max(b.max_var())
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            BoolExpr::Or(..) | BoolExpr::Xor(..) => 1,
            BoolExpr::And(..) => 2,
            BoolExpr::Not(_) => 3,
            BoolExpr::Const(_) | BoolExpr::Var(_) => 4,
        }
    }

    /// Renders with the minimal parentheses that reparse to the same tree.
    pub fn display<'a>(&'a self, names: &'a [String]) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, names }
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a BoolExpr,
    names: &'a [String],
}

impl ExprDisplay<'_> {
    fn child(&self, e: &BoolExpr, f: &mut fmt::Formatter<'_>, paren: bool) -> fmt::Result {
        let inner = ExprDisplay {
            expr: e,
            names: self.names,
        };
        if paren {
            write!(f, "({inner})")
        } else {
            write!(f, "{inner}")
        }
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = self.expr.precedence();
        match self.expr {
            BoolExpr::Const(b) => f.write_str(if *b { "1" } else { "0" }),
            BoolExpr::Var(i) => match self.names.get(*i) {
                Some(name) => f.write_str(name),
                None => write!(f, "x{}", i + 1),
            },
            BoolExpr::Not(e) => {
                f.write_str("!")?;
                self.child(e, f, e.precedence() < prec)
            }
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) | BoolExpr::Xor(a, b) => {
                let op = match self.expr {
                    BoolExpr::And(..) => " & ",
                    BoolExpr::Or(..) => " | ",
                    _ => " ^ ",
                };
                // left-associative: a right operand of equal precedence needs parentheses
                self.child(a, f, a.precedence() < prec)?;
                f.write_str(op)?;
                self.child(b, f, b.precedence() <= prec)
            }
        }
    }
}
