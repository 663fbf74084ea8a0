//! Information expressions: linear combinations of entropy terms.
//!
//! Text syntax, with subsets written as concatenated labels:
//! `H(A)`, `H(A|B)`, `I(A;B)`, `I(A;B|C)`, the bracket forms `(A,B)` and
//! `(A,B|C)`, and `[a,b,c,d]` for the Ingleton expression. Terms may carry a
//! rational or decimal coefficient, e.g. `-I(a;b) + 0.8 (a,b|c) + 3*(cd,z|ab)`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::functional::LinearFunctional;
use crate::ground::{GroundSet, Subset};
use crate::num::{parse_rational, rat, Rational};
use crate::poly::SetFunction;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Term {
    Entropy(Subset),
    Cond(Subset, Subset),
    Mutual(Subset, Subset),
    CondMutual(Subset, Subset, Subset),
    /// Four distinct element indices.
    Ingleton([usize; 4]),
}

impl Term {
    fn subsets(&self) -> Vec<Subset> {
        match *self {
            Term::Entropy(a) => vec![a],
            Term::Cond(a, b) | Term::Mutual(a, b) => vec![a, b],
            Term::CondMutual(a, b, c) => vec![a, b, c],
            Term::Ingleton(e) => e.iter().map(|&i| Subset::singleton(i)).collect(),
        }
    }

    /// Sparse expansion `Σ c·x(S)`.
    pub fn expand(&self) -> Vec<(Subset, i64)> {
        match *self {
            Term::Entropy(a) => vec![(a, 1)],
            Term::Cond(a, b) => vec![(a | b, 1), (b, -1)],
            Term::Mutual(a, b) => vec![(a, 1), (b, 1), (a | b, -1)],
            Term::CondMutual(a, b, c) => vec![(a | c, 1), (b | c, 1), (c, -1), (a | b | c, -1)],
            Term::Ingleton([a, b, c, d]) => {
                let s = Subset::singleton;
                let mut t = Vec::new();
                t.extend(Term::Mutual(s(a), s(b)).expand().into_iter().map(|(x, k)| (x, -k)));
                t.extend(Term::CondMutual(s(a), s(b), s(c)).expand());
                t.extend(Term::CondMutual(s(a), s(b), s(d)).expand());
                t.extend(Term::Mutual(s(c), s(d)).expand());
                t
            }
        }
    }

    fn eval<F: SetFunction>(&self, f: &F) -> F::Value {
        match *self {
            Term::Entropy(a) => f.at(a),
            Term::Cond(a, b) => f.cond(a, b),
            Term::Mutual(a, b) => f.mutual(a, b),
            Term::CondMutual(a, b, c) => f.cond_mutual(a, b, c),
            Term::Ingleton([a, b, c, d]) => f.ingleton(a, b, c, d),
        }
    }

    fn render(&self, g: &GroundSet) -> String {
        let n = |s: Subset| g.display(s);
        match *self {
            Term::Entropy(a) => format!("H({})", n(a)),
            Term::Cond(a, b) => format!("H({}|{})", n(a), n(b)),
            Term::Mutual(a, b) => format!("({},{})", n(a), n(b)),
            Term::CondMutual(a, b, c) => format!("({},{}|{})", n(a), n(b), n(c)),
            Term::Ingleton(e) => format!(
                "[{},{},{},{}]",
                g.label(e[0]),
                g.label(e[1]),
                g.label(e[2]),
                g.label(e[3])
            ),
        }
    }
}

/// A linear combination of information terms over a ground set.
#[derive(Clone, PartialEq, Debug)]
pub struct InfoExpr {
    ground: GroundSet,
    terms: Vec<(Rational, Term)>,
}

impl InfoExpr {
    pub fn new(ground: GroundSet) -> InfoExpr {
        InfoExpr {
            ground,
            terms: Vec::new(),
        }
    }

    /// Append a term after checking its arguments.
    pub fn push(&mut self, coeff: Rational, term: Term) -> Result<()> {
        let full = self.ground.full();
        for s in term.subsets() {
            if !s.is_subset_of(full) {
                return Err(Error::OutOfGround(format!("{:#b}", s.0)));
            }
        }
        if let Term::Ingleton(e) = term {
            let set = Subset::from_elements(e);
            if set.len() != 4 {
                return Err(Error::Invalid("Ingleton arguments must be four distinct elements".into()));
            }
        }
        self.terms.push((coeff, term));
        Ok(())
    }

    pub fn with(mut self, coeff: Rational, term: Term) -> Result<InfoExpr> {
        self.push(coeff, term)?;
        Ok(self)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn terms(&self) -> &[(Rational, Term)] {
        &self.terms
    }

    pub fn parse(ground: &GroundSet, text: &str) -> Result<InfoExpr> {
        let text = text.replace('‖', "|");
        Parser {
            g: ground,
            s: text.as_bytes(),
            src: &text,
            pos: 0,
        }
        .expr()
    }

    pub fn eval<F: SetFunction>(&self, f: &F) -> Result<F::Value>
    where
        F::Value: std::ops::Mul<Output = F::Value> + From<RationalScalar>,
    {
        if f.ground() != &self.ground {
            return Err(Error::GroundMismatch);
        }
        let mut acc = F::Value::zero();
        for (c, t) in &self.terms {
            acc = acc + F::Value::from(RationalScalar(c.clone())) * t.eval(f);
        }
        Ok(acc)
    }

    pub fn to_functional(&self) -> LinearFunctional {
        let mut e = LinearFunctional::zero(self.ground.clone());
        for (c, t) in &self.terms {
            for (s, k) in t.expand() {
                e.add_term(s, c * rat(k));
            }
        }
        e
    }
}

impl fmt::Display for InfoExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, t)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            let sign = match (i, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let coef = if mag.is_one() {
                String::new()
            } else {
                format!("{mag} ")
            };
            write!(f, "{sign}{coef}{}", t.render(&self.ground))?;
        }
        Ok(())
    }
}

/// Wrapper letting rational coefficients act on both exact and float values.
pub struct RationalScalar(pub Rational);

impl From<RationalScalar> for Rational {
    fn from(r: RationalScalar) -> Rational {
        r.0
    }
}

impl From<RationalScalar> for f64 {
    fn from(r: RationalScalar) -> f64 {
        use num_traits::ToPrimitive;
        r.0.to_f64().unwrap_or(f64::NAN)
    }
}

struct Parser<'a> {
    g: &'a GroundSet,
    s: &'a [u8],
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Invalid(format!("{msg} at offset {} in `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(mut self) -> Result<InfoExpr> {
        let mut out = InfoExpr::new(self.g.clone());
        let mut first = true;
        loop {
            let mut sign = Rational::one();
            match self.peek() {
                None if !first => break,
                None => return Err(self.err("empty expression")),
                Some(b'+') => self.pos += 1,
                Some(b'-') => {
                    self.pos += 1;
                    sign = -sign;
                }
                Some(_) if first => {}
                Some(_) => return Err(self.err("expected `+` or `-`")),
            }
            first = false;
            let coeff = self.coefficient()? * sign;
            let term = self.atom()?;
            out.push(coeff, term)?;
        }
        Ok(out)
    }

    fn coefficient(&mut self) -> Result<Rational> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || b"./".contains(&self.s[self.pos])) {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(Rational::one());
        }
        let c = parse_rational(&self.src[start..self.pos])?;
        if self.peek() == Some(b'*') {
            self.pos += 1;
        }
        Ok(c)
    }

    /// Read raw text up to one of the stop bytes.
    fn until(&mut self, stops: &[u8]) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && !stops.contains(&self.s[self.pos]) {
            self.pos += 1;
        }
        if self.pos >= self.s.len() {
            return Err(self.err("unterminated term"));
        }
        Ok(self.src[start..self.pos].trim().to_string())
    }

    fn subset(&mut self, stops: &[u8]) -> Result<Subset> {
        let t = self.until(stops)?;
        let s = self.g.parse_subset(&t)?;
        if s.is_empty() {
            return Err(self.err("empty argument"));
        }
        Ok(s)
    }

    /// Optional `|C` tail before the closing delimiter.
    fn condition(&mut self, close: u8) -> Result<Option<Subset>> {
        match self.peek() {
            Some(b'|') => {
                self.pos += 1;
                let c = self.subset(&[close])?;
                self.expect(close)?;
                Ok(Some(c))
            }
            _ => {
                self.expect(close)?;
                Ok(None)
            }
        }
    }

    fn atom(&mut self) -> Result<Term> {
        match self.peek() {
            Some(b'H') => {
                self.pos += 1;
                self.expect(b'(')?;
                let a = self.subset(b"|)")?;
                Ok(match self.condition(b')')? {
                    Some(b) => Term::Cond(a, b),
                    None => Term::Entropy(a),
                })
            }
            Some(b'I') if self.s.get(self.pos + 1) == Some(&b'(') => {
                self.pos += 1;
                self.expect(b'(')?;
                let a = self.subset(b";,")?;
                self.pos += 1;
                let b = self.subset(b"|)")?;
                Ok(match self.condition(b')')? {
                    Some(c) => Term::CondMutual(a, b, c),
                    None => Term::Mutual(a, b),
                })
            }
            Some(b'(') => {
                self.pos += 1;
                let a = self.subset(b",;")?;
                self.pos += 1;
                let b = self.subset(b"|)")?;
                Ok(match self.condition(b')')? {
                    Some(c) => Term::CondMutual(a, b, c),
                    None => Term::Mutual(a, b),
                })
            }
            Some(b'[') => {
                self.pos += 1;
                let body = self.until(b"]")?;
                self.pos += 1;
                let parts: Vec<&str> = body.split(',').map(str::trim).collect();
                if parts.len() != 4 {
                    return Err(self.err("Ingleton needs four elements"));
                }
                let mut e = [0usize; 4];
                for (k, p) in parts.iter().enumerate() {
                    e[k] = self.g.element(p)?;
                }
                Ok(Term::Ingleton(e))
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shannon::{r_vector, u_vector, vamos_vector};

    fn g4() -> GroundSet {
        GroundSet::letters(4).unwrap()
    }

    #[test]
    fn ingleton_values() {
        let g = g4();
        let e = InfoExpr::parse(&g, "[a,b,c,d]").unwrap();
        let v = vamos_vector(&g, g.parse_subset("cd").unwrap()).unwrap();
        assert_eq!(e.eval(&v).unwrap(), rat(-1));
        assert_eq!(e.eval(&u_vector(&g).unwrap()).unwrap(), rat(2));
    }

    #[test]
    fn zy_on_vamos() {
        let g = g4();
        let e = InfoExpr::parse(&g, "[a,b,c,d] + (a,b|c) + (a,c|b) + (b,c|a)").unwrap();
        let v = vamos_vector(&g, g.parse_subset("cd").unwrap()).unwrap();
        assert_eq!(e.eval(&v).unwrap(), rat(-1));
        let f = e.to_functional();
        assert_eq!(v.dot(&f).unwrap(), rat(-1));
        assert!(f.support_len() <= 15);
    }

    #[test]
    fn forms_and_degenerate() {
        let g = GroundSet::letters(2).unwrap();
        let e = InfoExpr::parse(&g, "H(a|b)").unwrap().to_functional();
        assert_eq!(e.coeff(Subset(3)), rat(1));
        assert_eq!(e.coeff(Subset(2)), rat(-1));
        let z = InfoExpr::parse(&g, "I(a;b|a)").unwrap().to_functional();
        assert!(z.is_zero());
        let r = r_vector(&g, g.full()).unwrap();
        assert_eq!(InfoExpr::parse(&g, "I(a;b)").unwrap().eval(&r).unwrap(), rat(1));
        assert!(InfoExpr::parse(&g, "H(x)").is_err());
        assert!(InfoExpr::parse(&g4(), "[a,a,b,c]").is_err());
    }

    #[test]
    fn coefficients_and_display() {
        let g = GroundSet::letters(3).unwrap();
        let e = InfoExpr::parse(&g, "-2 H(a) + 0.8*(a,b|c) - 3/2 H(ab|c)").unwrap();
        assert_eq!(e.terms().len(), 3);
        let back = InfoExpr::parse(&g, &e.to_string()).unwrap();
        assert_eq!(back.to_functional(), e.to_functional());
    }
}
