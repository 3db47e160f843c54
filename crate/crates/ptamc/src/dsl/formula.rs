use std::fmt;

use num_traits::{One, Zero};

use super::lexer::{Cursor, Tok};
use super::DslError;
use crate::model::{parse_rat, Rat};

/// Probability comparison of a `P` operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProbCmp {
    Lt,
    Le,
    Ge,
    Gt,
}

impl ProbCmp {
    pub fn symbol(self) -> &'static str {
        match self {
            ProbCmp::Lt => "<",
            ProbCmp::Le => "<=",
            ProbCmp::Ge => ">=",
            ProbCmp::Gt => ">",
        }
    }

    pub fn holds(self, p: &Rat, bound: &Rat) -> bool {
        match self {
            ProbCmp::Lt => p < bound,
            ProbCmp::Le => p <= bound,
            ProbCmp::Ge => p >= bound,
            ProbCmp::Gt => p > bound,
        }
    }

    /// Lower-bound comparisons are decided by the minimising adversary.
    pub fn uses_min(self) -> bool {
        matches!(self, ProbCmp::Ge | ProbCmp::Gt)
    }

    /// The comparison obtained by passing to the complementary event.
    pub fn mirrored(self) -> ProbCmp {
        match self {
            ProbCmp::Lt => ProbCmp::Gt,
            ProbCmp::Le => ProbCmp::Ge,
            ProbCmp::Ge => ProbCmp::Le,
            ProbCmp::Gt => ProbCmp::Lt,
        }
    }
}

/// Time relation of a until subscript.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TimeRel {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Timing {
    pub rel: TimeRel,
    pub bound: u64,
}

impl Timing {
    pub fn holds(&self, t: &Rat) -> bool {
        let c = Rat::from_integer(self.bound.into());
        match self.rel {
            TimeRel::Le => *t <= c,
            TimeRel::Eq => *t == c,
            TimeRel::Ge => *t >= c,
        }
    }
}

/// Formula tree after desugaring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Prob {
        cmp: ProbCmp,
        bound: Rat,
        left: Box<Formula>,
        right: Box<Formula>,
        timing: Option<Timing>,
    },
}

/// The sub-logics, from most to least restrictive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormulaClass {
    Pctl,
    Ptctl01NonPunctual,
    Ptctl01,
    PtctlNonPunctual,
    Ptctl,
}

impl FormulaClass {
    pub fn name(self) -> &'static str {
        match self {
            FormulaClass::Pctl => "PCTL",
            FormulaClass::Ptctl01NonPunctual => "PTCTL01_NONPUNCTUAL",
            FormulaClass::Ptctl01 => "PTCTL01",
            FormulaClass::PtctlNonPunctual => "PTCTL_NONPUNCTUAL",
            FormulaClass::Ptctl => "PTCTL",
        }
    }

    /// Whether every formula of `self` also belongs to `other`.
    pub fn within(self, other: FormulaClass) -> bool {
        use FormulaClass::*;
        match (self, other) {
            (a, b) if a == b => true,
            (_, Ptctl) => true,
            (Pctl, PtctlNonPunctual) => true,
            (Ptctl01NonPunctual, Ptctl01 | PtctlNonPunctual) => true,
            _ => false,
        }
    }
}

impl fmt::Display for FormulaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Formula {
    pub fn atom(a: &str) -> Formula {
        Formula::Atom(a.to_string())
    }

    pub fn falsity() -> Formula {
        Formula::Not(Box::new(Formula::True))
    }

    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::Not(g) => *g,
            g => Formula::Not(Box::new(g)),
        }
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(Formula::not(a), Formula::not(b)))
    }

    pub fn until(cmp: ProbCmp, bound: Rat, left: Formula, right: Formula, timing: Option<Timing>) -> Formula {
        Formula::Prob { cmp, bound, left: Box::new(left), right: Box::new(right), timing }
    }

    pub fn eventually(cmp: ProbCmp, bound: Rat, target: Formula, timing: Option<Timing>) -> Formula {
        Formula::until(cmp, bound, Formula::True, target, timing)
    }

    /// `P{cmp z}[G phi]` as `P{mirrored 1-z}[F !phi]`.
    pub fn always(cmp: ProbCmp, bound: Rat, body: Formula, timing: Option<Timing>) -> Formula {
        Formula::eventually(cmp.mirrored(), Rat::one() - bound, Formula::not(body), timing)
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::Atom(_) => vec![],
            Formula::Not(a) => vec![a],
            Formula::And(a, b) => vec![a, b],
            Formula::Prob { left, right, .. } => vec![left, right],
        }
    }

    /// Number of distinct subformulae.
    pub fn size(&self) -> usize {
        let mut seen: Vec<&Formula> = Vec::new();
        fn walk<'a>(f: &'a Formula, seen: &mut Vec<&'a Formula>) {
            if seen.contains(&f) {
                return;
            }
            seen.push(f);
            for c in f.children() {
                walk(c, seen);
            }
        }
        walk(self, &mut seen);
        seen.len()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        fn walk(f: &Formula, out: &mut Vec<String>) {
            if let Formula::Atom(a) = f {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
            for c in f.children() {
                walk(c, out);
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn classify(&self) -> FormulaClass {
        let (mut timed, mut punctual, mut quantitative) = (false, false, false);
        fn walk(f: &Formula, t: &mut bool, p: &mut bool, q: &mut bool) {
            if let Formula::Prob { bound, timing, .. } = f {
                if let Some(tm) = timing {
                    *t = true;
                    *p |= tm.rel == TimeRel::Eq;
                }
                *q |= !(bound.is_zero() || bound.is_one());
            }
            for c in f.children() {
                walk(c, t, p, q);
            }
        }
        walk(self, &mut timed, &mut punctual, &mut quantitative);
        match (timed, punctual, quantitative) {
            (false, _, _) => FormulaClass::Pctl,
            (true, false, false) => FormulaClass::Ptctl01NonPunctual,
            (true, true, false) => FormulaClass::Ptctl01,
            (true, false, true) => FormulaClass::PtctlNonPunctual,
            (true, true, true) => FormulaClass::Ptctl,
        }
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::Atom(a) => write!(f, "\"{}\"", a),
            Formula::Not(a) if **a == Formula::True => write!(f, "false"),
            Formula::Not(a) => write!(f, "!{}", Paren(a)),
            Formula::And(a, b) => write!(f, "{} & {}", Paren(a), Paren(b)),
            Formula::Prob { cmp, bound, left, right, timing } => {
                write!(f, "P{{{}{}}}[ {} U", cmp.symbol(), fmt_rat(bound), Paren(left))?;
                if let Some(t) = timing {
                    let rel = match t.rel {
                        TimeRel::Le => "<=",
                        TimeRel::Eq => "=",
                        TimeRel::Ge => ">=",
                    };
                    write!(f, "[{}{}]", rel, t.bound)?;
                }
                write!(f, " {} ]", Paren(right))
            }
        }
    }
}

struct Paren<'a>(&'a Formula);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Formula::And(..) => write!(f, "({})", self.0),
            other => write!(f, "{}", other),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, DslError> {
    let mut cur = Cursor::new(text)?;
    let f = implication(&mut cur)?;
    if !cur.at_eof() {
        return Err(cur.error("trailing input after formula"));
    }
    Ok(f)
}

fn implication(cur: &mut Cursor) -> Result<Formula, DslError> {
    let lhs = disjunction(cur)?;
    if cur.eat_sym("=>") {
        let rhs = implication(cur)?;
        return Ok(Formula::or(Formula::not(lhs), rhs));
    }
    Ok(lhs)
}

fn disjunction(cur: &mut Cursor) -> Result<Formula, DslError> {
    let mut f = conjunction(cur)?;
    while cur.eat_sym("|") || cur.eat_sym("||") {
        f = Formula::or(f, conjunction(cur)?);
    }
    Ok(f)
}

fn conjunction(cur: &mut Cursor) -> Result<Formula, DslError> {
    let mut f = unary(cur)?;
    while cur.eat_sym("&") || cur.eat_sym("&&") {
        f = Formula::and(f, unary(cur)?);
    }
    Ok(f)
}

fn unary(cur: &mut Cursor) -> Result<Formula, DslError> {
    if cur.eat_sym("!") {
        return Ok(Formula::not(unary(cur)?));
    }
    if cur.eat_sym("(") {
        let f = implication(cur)?;
        cur.expect_sym(")")?;
        return Ok(f);
    }
    match cur.peek().clone() {
        Tok::Str(s) => {
            cur.next();
            Ok(Formula::Atom(s))
        }
        Tok::Ident(s) if s == "true" => {
            cur.next();
            Ok(Formula::True)
        }
        Tok::Ident(s) if s == "false" => {
            cur.next();
            Ok(Formula::falsity())
        }
        Tok::Ident(s) if s == "P" && matches!(cur.peek_at(1), Tok::Sym("{")) => prob(cur),
        Tok::Ident(s) => {
            cur.next();
            Ok(Formula::Atom(s))
        }
        _ => Err(cur.error("expected formula")),
    }
}

fn prob(cur: &mut Cursor) -> Result<Formula, DslError> {
    cur.expect_kw("P")?;
    cur.expect_sym("{")?;
    let cmp = match cur.next() {
        Tok::Sym("<") => ProbCmp::Lt,
        Tok::Sym("<=") => ProbCmp::Le,
        Tok::Sym(">=") => ProbCmp::Ge,
        Tok::Sym(">") => ProbCmp::Gt,
        _ => return Err(cur.error("expected probability comparison")),
    };
    let bound = rational(cur)?;
    if bound < Rat::zero() || bound > Rat::one() {
        return Err(DslError::Threshold(fmt_rat(&bound)));
    }
    cur.expect_sym("}")?;
    cur.expect_sym("[")?;
    let f = if cur.eat_kw("F") {
        let timing = subscript(cur)?;
        Formula::eventually(cmp, bound, implication(cur)?, timing)
    } else if cur.eat_kw("G") {
        let timing = subscript(cur)?;
        Formula::always(cmp, bound, implication(cur)?, timing)
    } else {
        let left = implication(cur)?;
        cur.expect_kw("U")?;
        let timing = subscript(cur)?;
        Formula::until(cmp, bound, left, implication(cur)?, timing)
    };
    cur.expect_sym("]")?;
    Ok(f)
}

fn subscript(cur: &mut Cursor) -> Result<Option<Timing>, DslError> {
    if !cur.eat_sym("[") {
        return Ok(None);
    }
    let rel = match cur.next() {
        Tok::Sym("<=") => TimeRel::Le,
        Tok::Sym("=") | Tok::Sym("==") => TimeRel::Eq,
        Tok::Sym(">=") => TimeRel::Ge,
        _ => return Err(cur.error("expected <=, = or >= in time bound")),
    };
    let bound = cur.natural()?;
    cur.expect_sym("]")?;
    Ok(Some(Timing { rel, bound }))
}

/// `num`, `num/den` or a decimal literal.
pub(crate) fn rational(cur: &mut Cursor) -> Result<Rat, DslError> {
    let text = match cur.next() {
        Tok::Num(n) => n,
        _ => return Err(cur.error("expected number")),
    };
    let text = if cur.eat_sym("/") {
        match cur.next() {
            Tok::Num(d) => format!("{}/{}", text, d),
            _ => return Err(cur.error("expected denominator")),
        }
    } else {
        text
    };
    parse_rat(&text).ok_or_else(|| cur.error(&format!("malformed number `{}`", text)))
}
