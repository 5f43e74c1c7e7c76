//! Recursive-descent parser for the expression text grammar used by input
//! decks, fixtures, and recipe bodies.
//!
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := primary ['^' exponent]
//! primary:= number | 'i' | name | fn '(' expr ')' | '(' expr ')'
//! fn     := exp | cosh | sinh | cos | sin   (arguments must be affine)
//!
//! Recipe bodies additionally allow entry symbols E[i,j], log(...), and
//! rational powers u^(p/q).

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::context::Context;
use crate::coproduct::Body;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '0'..='9' => {
                let mut n = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        n.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Num(n.parse().unwrap()));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut n = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        n.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Ident(n));
            }
            '+' => {
                chars.next();
                out.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                out.push(Tok::Minus);
            }
            '*' => {
                chars.next();
                out.push(Tok::Star);
            }
            '/' => {
                chars.next();
                out.push(Tok::Slash);
            }
            '^' => {
                chars.next();
                out.push(Tok::Caret);
            }
            '(' => {
                chars.next();
                out.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                out.push(Tok::RParen);
            }
            '[' => {
                chars.next();
                out.push(Tok::LBracket);
            }
            ']' => {
                chars.next();
                out.push(Tok::RBracket);
            }
            ',' => {
                chars.next();
                out.push(Tok::Comma);
            }
            _ => return Err(Error::Parse(format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

struct P<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ctx: &'a Context,
    /// allow entry symbols / log / coordinates-as-symbols (recipe grammar)
    recipe: bool,
}

impl<'a> P<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            got => Err(Error::Parse(format!("expected {t:?}, got {got:?}"))),
        }
    }

    // ----- direct Expr evaluation -----

    fn expr(&mut self) -> Result<Expr> {
        let mut neg = false;
        if self.peek() == Some(&Tok::Minus) {
            self.next();
            neg = true;
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                Some(Tok::Slash) => {
                    self.next();
                    let f = self.factor()?;
                    acc = acc.div_unit(&f).map_err(|_| {
                        Error::Parse("division by a non-invertible expression".into())
                    })?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.next();
            let e = self.int_exponent()?;
            if e >= 0 {
                Ok(base.pow(e as u32))
            } else {
                let inv = base
                    .unit_inv()
                    .ok_or_else(|| Error::Parse("negative power of a non-unit".into()))?;
                Ok(inv.pow((-e) as u32))
            }
        } else {
            Ok(base)
        }
    }

    fn int_exponent(&mut self) -> Result<i64> {
        let mut neg = false;
        let mut parens = false;
        if self.peek() == Some(&Tok::LParen) {
            self.next();
            parens = true;
        }
        if self.peek() == Some(&Tok::Minus) {
            self.next();
            neg = true;
        }
        let n = match self.next() {
            Some(Tok::Num(n)) => n,
            got => return Err(Error::Parse(format!("expected integer exponent, got {got:?}"))),
        };
        if parens {
            self.expect(Tok::RParen)?;
        }
        let v: i64 = n
            .to_string()
            .parse()
            .map_err(|_| Error::Parse("exponent too large".into()))?;
        Ok(if neg { -v } else { v })
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(Expr::from_scalar(Scalar::from_gauss(
                crate::scalar::GaussRat::from_rational(BigRational::from_integer(n)),
            ))),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => self.ident_expr(&name),
            got => Err(Error::Parse(format!("unexpected token {got:?}"))),
        }
    }

    fn ident_expr(&mut self, name: &str) -> Result<Expr> {
        match name {
            "i" => Ok(Expr::from_scalar(Scalar::i())),
            "exp" | "cosh" | "sinh" | "cos" | "sin" => {
                self.expect(Tok::LParen)?;
                let arg = self.expr()?;
                self.expect(Tok::RParen)?;
                trig_expand(name, &arg)
            }
            _ => {
                if let Some(p) = self.ctx.param(name) {
                    Ok(Expr::from_scalar(Scalar::param(p)))
                } else if let Some(x) = self.ctx.coord(name) {
                    Ok(Expr::coord(x))
                } else {
                    Err(Error::Parse(format!("unknown name `{name}`")))
                }
            }
        }
    }

    // ----- recipe bodies -----

    fn body(&mut self) -> Result<Body> {
        let mut acc = if self.peek() == Some(&Tok::Minus) {
            self.next();
            Body::Neg(Box::new(self.body_term()?))
        } else {
            self.body_term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    acc = Body::Add(Box::new(acc), Box::new(self.body_term()?));
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = Body::Sub(Box::new(acc), Box::new(self.body_term()?));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn body_term(&mut self) -> Result<Body> {
        let mut acc = self.body_factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    acc = Body::Mul(Box::new(acc), Box::new(self.body_factor()?));
                }
                Some(Tok::Slash) => {
                    self.next();
                    acc = Body::Div(Box::new(acc), Box::new(self.body_factor()?));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn body_factor(&mut self) -> Result<Body> {
        let base = self.body_primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.next();
            let (p, q) = self.rational_exponent()?;
            return Ok(Body::Pow(
                Box::new(base),
                BigRational::new(BigInt::from(p), BigInt::from(q)),
            ));
        }
        Ok(base)
    }

    fn rational_exponent(&mut self) -> Result<(i64, i64)> {
        if self.peek() == Some(&Tok::LParen) {
            self.next();
            let mut neg = false;
            if self.peek() == Some(&Tok::Minus) {
                self.next();
                neg = true;
            }
            let p = match self.next() {
                Some(Tok::Num(n)) => n.to_string().parse::<i64>().unwrap(),
                got => return Err(Error::Parse(format!("expected integer, got {got:?}"))),
            };
            let q = if self.peek() == Some(&Tok::Slash) {
                self.next();
                match self.next() {
                    Some(Tok::Num(n)) => n.to_string().parse::<i64>().unwrap(),
                    got => return Err(Error::Parse(format!("expected integer, got {got:?}"))),
                }
            } else {
                1
            };
            self.expect(Tok::RParen)?;
            Ok((if neg { -p } else { p }, q))
        } else {
            let mut neg = false;
            if self.peek() == Some(&Tok::Minus) {
                self.next();
                neg = true;
            }
            match self.next() {
                Some(Tok::Num(n)) => {
                    let p = n.to_string().parse::<i64>().unwrap();
                    Ok((if neg { -p } else { p }, 1))
                }
                got => Err(Error::Parse(format!("expected exponent, got {got:?}"))),
            }
        }
    }

    fn body_primary(&mut self) -> Result<Body> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(Body::Const(Scalar::from_gauss(
                crate::scalar::GaussRat::from_rational(BigRational::from_integer(n)),
            ))),
            Some(Tok::LParen) => {
                let b = self.body()?;
                self.expect(Tok::RParen)?;
                Ok(b)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "i" => Ok(Body::Const(Scalar::i())),
                "E" => {
                    self.expect(Tok::LBracket)?;
                    let r = match self.next() {
                        Some(Tok::Num(n)) => n.to_string().parse::<usize>().unwrap(),
                        got => return Err(Error::Parse(format!("expected row index, got {got:?}"))),
                    };
                    self.expect(Tok::Comma)?;
                    let c = match self.next() {
                        Some(Tok::Num(n)) => n.to_string().parse::<usize>().unwrap(),
                        got => return Err(Error::Parse(format!("expected col index, got {got:?}"))),
                    };
                    self.expect(Tok::RBracket)?;
                    if r == 0 || c == 0 {
                        return Err(Error::Parse("entry indices are 1-based".into()));
                    }
                    Ok(Body::Entry(r - 1, c - 1))
                }
                "log" => {
                    self.expect(Tok::LParen)?;
                    let b = self.body()?;
                    self.expect(Tok::RParen)?;
                    Ok(Body::Log(Box::new(b)))
                }
                "exp" => {
                    self.expect(Tok::LParen)?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen)?;
                    let (c0, lin) = arg
                        .as_affine()
                        .ok_or_else(|| Error::Parse("exp argument must be affine".into()))?;
                    if !c0.is_zero() {
                        return Err(Error::Parse("exp argument must have no constant".into()));
                    }
                    Ok(Body::Exp(lin))
                }
                _ => {
                    if let Some(p) = self.ctx.param(&name) {
                        Ok(Body::Const(Scalar::param(p)))
                    } else if let Some(x) = self.ctx.coord(&name) {
                        Ok(Body::Coord(x))
                    } else {
                        Err(Error::Parse(format!("unknown name `{name}`")))
                    }
                }
            },
            got => Err(Error::Parse(format!("unexpected token {got:?}"))),
        }
    }
}

fn trig_expand(name: &str, arg: &Expr) -> Result<Expr> {
    let (c0, lin) = arg
        .as_affine()
        .ok_or_else(|| Error::Parse(format!("{name} argument must be affine in coordinates")))?;
    if !c0.is_zero() {
        return Err(Error::Parse(format!(
            "{name} argument must have zero constant part"
        )));
    }
    let half = Scalar::from_frac(1, 2);
    match name {
        "exp" => Ok(Expr::exp(lin)),
        "cosh" => Ok(Expr::exp(lin.clone())
            .add(&Expr::exp(lin.neg()))
            .scalar_mul(&half)),
        "sinh" => Ok(Expr::exp(lin.clone())
            .sub(&Expr::exp(lin.neg()))
            .scalar_mul(&half)),
        "cos" => {
            let il = lin.scale(&Scalar::i());
            Ok(Expr::exp(il.clone())
                .add(&Expr::exp(il.neg()))
                .scalar_mul(&half))
        }
        "sin" => {
            let il = lin.scale(&Scalar::i());
            let denom = Scalar::i().mul(&Scalar::from_int(2));
            Ok(Expr::exp(il.clone())
                .sub(&Expr::exp(il.neg()))
                .scalar_mul(&denom.inv()))
        }
        _ => unreachable!(),
    }
}

/// Parse an expression over the context's parameters and coordinates.
pub fn parse_expr(ctx: &Context, s: &str) -> Result<Expr> {
    let toks = tokenize(s)?;
    let mut p = P {
        toks,
        pos: 0,
        ctx,
        recipe: false,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in `{s}`")));
    }
    Ok(e)
}

/// Parse a scalar (coordinate-free expression).
pub fn parse_scalar(ctx: &Context, s: &str) -> Result<Scalar> {
    let e = parse_expr(ctx, s)?;
    e.as_scalar()
        .ok_or_else(|| Error::Parse(format!("`{s}` is not a scalar")))
}

/// Parse a recipe body.
pub fn parse_body(ctx: &Context, s: &str) -> Result<Body> {
    let toks = tokenize(s)?;
    let mut p = P {
        toks,
        pos: 0,
        ctx,
        recipe: true,
    };
    let b = p.body()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in `{s}`")));
    }
    let _ = p.recipe;
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{CoordId, ParamId};
    use crate::expr::LinForm;
    use crate::print::Printer;

    fn ctx() -> Context {
        Context::new(&["z", "eta"], &["Jp", "Jm", "J3", "P0"]).unwrap()
    }

    #[test]
    fn parses_book_bracket() {
        let c = ctx();
        let e = parse_expr(&c, "(1 - exp(-2*z*J3))/(2*z) + 2*z*Jp*Jm").unwrap();
        let z = Scalar::param(ParamId(0));
        let two_z = z.mul(&Scalar::from_int(2));
        let expected = Expr::one()
            .sub(&Expr::exp(LinForm::term(CoordId(2), two_z.neg())))
            .scalar_mul(&two_z.inv())
            .add(
                &Expr::coord(CoordId(0))
                    .mul(&Expr::coord(CoordId(1)))
                    .scalar_mul(&two_z),
            );
        assert_eq!(e, expected);
    }

    #[test]
    fn parse_trig_and_complex() {
        let c = ctx();
        let e = parse_expr(&c, "cosh(z*J3/2) + sinh(z*J3/2)").unwrap();
        let half_z = Scalar::param(ParamId(0)).mul(&Scalar::from_frac(1, 2));
        assert_eq!(e, Expr::exp(LinForm::term(CoordId(2), half_z)));
        let t = parse_expr(&c, "cos(eta*P0)^2 + sin(eta*P0)^2").unwrap();
        assert!(t.is_one());
        let s = parse_scalar(&c, "(1+i)/2").unwrap();
        assert_eq!(s.mul(&Scalar::from_int(2)), Scalar::one().add(&Scalar::i()));
    }

    #[test]
    fn print_parse_roundtrip() {
        let c = ctx();
        let samples = [
            "(1 - exp(-2*z*J3))/(2*z) + 2*z*Jp*Jm",
            "Jp^2*exp(z*J3) - 1/2*Jm",
            "exp(-z*P0)*cos(eta*P0)",
            "-1/(2*z)",
            "i*Jp - (1+i)/2*Jm",
        ];
        for s in samples {
            let e = parse_expr(&c, s).unwrap();
            for fold in [false, true] {
                let printed = Printer::with_fold(&c, fold).expr(&e);
                let re = parse_expr(&c, &printed).unwrap();
                assert_eq!(e, re, "roundtrip failed for `{s}` via `{printed}`");
            }
        }
    }

    #[test]
    fn parse_recipe_bodies() {
        let c = ctx();
        assert!(parse_body(&c, "-log(E[1,1])/z").is_ok());
        assert!(parse_body(&c, "E[2,4]/((z/2)*(E[2,2]-E[5,2])^(1/2)*(E[2,2]+E[5,2])^(1/2))").is_ok());
        assert!(parse_body(&c, "E[0,1]").is_err());
    }
}
