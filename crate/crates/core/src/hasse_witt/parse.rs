//! Plain-text polynomial literals.
//!
//! ```text
//! poly   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' integer)?
//! atom   := integer | 'x' integer | 'a' | '(' poly ')'
//! ```
//!
//! `x0, x1, …` are the coordinates and `a` is the generator of `F_{p^m}` over `F_p`.
//! Whitespace is ignored and a leading `-` is allowed.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::poly::HomogPoly;
use crate::error::{Error, Result};
use crate::galois_witt::{FieldDesc, FqElem};

type Sparse = BTreeMap<Vec<u32>, FqElem>;

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    field: Arc<FieldDesc>,
    nvars: usize,
}

fn err(msg: impl Into<String>) -> Error {
    Error::Malformed(format!("polynomial literal: {}", msg.into()))
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| err(format!("expected a number at offset {start}")))
    }

    fn constant(&self, c: FqElem) -> Sparse {
        let mut m = Sparse::new();
        if !c.is_zero() {
            m.insert(vec![0; self.nvars], c);
        }
        m
    }

    fn poly(&mut self) -> Result<Sparse> {
        let mut acc = Sparse::new();
        let mut sign = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = true;
        }
        loop {
            let t = self.term()?;
            add_into(&mut acc, t, sign);
            match self.peek() {
                Some(b'+') => sign = false,
                Some(b'-') => sign = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Sparse> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Sparse> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.number()?;
        let mut out = self.constant(self.field.one());
        for _ in 0..e {
            out = mul(&out, &base);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Sparse> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let i = self.number()? as usize;
                if i >= self.nvars {
                    return Err(err(format!("x{i} outside {} variables", self.nvars)));
                }
                let mut e = vec![0; self.nvars];
                e[i] = 1;
                Ok(BTreeMap::from([(e, self.field.one())]))
            }
            Some(b'a') => {
                self.pos += 1;
                Ok(self.constant(self.field.generator()))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.poly()?;
                if self.peek() != Some(b')') {
                    return Err(err(format!("unbalanced parenthesis at offset {}", self.pos)));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ok(self.constant(self.field.from_int((n % self.field.p) as i64)))
            }
            Some(c) => Err(err(format!("unexpected '{}' at offset {}", c as char, self.pos))),
            None => Err(err("unexpected end of input")),
        }
    }
}

fn add_into(acc: &mut Sparse, t: Sparse, negate: bool) {
    for (e, c) in t {
        let c = if negate { c.neg() } else { c };
        let sum = match acc.get(&e) {
            Some(x) => x.add(&c),
            None => c,
        };
        if sum.is_zero() {
            acc.remove(&e);
        } else {
            acc.insert(e, sum);
        }
    }
}

fn mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (e1, c1) in a {
        for (e2, c2) in b {
            let e = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
            add_into(&mut out, BTreeMap::from([(e, c1.mul(c2))]), false);
        }
    }
    out
}

fn max_var(text: &str) -> usize {
    let b = text.as_bytes();
    let mut best = 0;
    for (i, &c) in b.iter().enumerate() {
        if c == b'x' {
            let digits: String = b[i + 1..].iter().take_while(|d| d.is_ascii_digit()).map(|&d| d as char).collect();
            if let Ok(k) = digits.parse::<usize>() {
                best = best.max(k + 1);
            }
        }
    }
    best
}

/// Parse a homogeneous form. With `nvars = None` the variable count is one more than the
/// largest index that occurs.
pub fn parse_poly(text: &str, field: &Arc<FieldDesc>, nvars: Option<usize>) -> Result<HomogPoly> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let nvars = nvars.unwrap_or_else(|| max_var(&compact)).max(1);
    let mut p = Parser { s: compact.as_bytes(), pos: 0, field: field.clone(), nvars };
    let terms = p.poly()?;
    if p.pos != compact.len() {
        return Err(err(format!("trailing input at offset {}", p.pos)));
    }
    let degree = terms.keys().next().map_or(0, |e| e.iter().sum());
    HomogPoly::from_terms(field, nvars, degree, terms.into_iter().collect())
        .map_err(|_| err("form is not homogeneous"))
}
