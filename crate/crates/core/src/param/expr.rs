//! Parser for the textual form of a [`ParamFn`].
//!
//! ```text
//! expr    := term ('+' term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := primary ('^' (number | '(' number ')'))?
//! primary := number | 't' | '(' expr ')' | call
//! call    := const(c) | pow(θ) | logms(r1[,r2[,r3]])
//!          | karamata(alpha=A, beta=B, r=x)
//!          | compose(f, g) | interp(φ, ε, δ) | qsv(χ, θ, φ)
//!          | phis(φ, s, m) | clamp(f, t0)
//! A       := zero | inv_log(a) | inv_pow(a, p) | sin_log(a)
//! B       := const(b) | sin_loglog(b) | step(b, at)
//! ```
//!
//! A bare number is a positive constant and `t` is `pow(1)`.

use super::{derived, AlphaSpec, BetaSpec, KaramataForm, ParamFn};
use crate::error::{Error, Result};

pub fn parse(src: &str) -> Result<ParamFn> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let f = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::ExpressionParse {
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn at(&self, pos: usize, message: impl Into<String>) -> Error {
        Error::ExpressionParse {
            column: pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start || self.src[start].is_ascii_digit() {
            self.pos = start;
            None
        } else {
            Some(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let s = self.src;
        let mut i = self.pos;
        if i < s.len() && (s[i] == b'-' || s[i] == b'+') {
            i += 1;
        }
        let digits_start = i;
        while i < s.len() && (s[i].is_ascii_digit() || s[i] == b'.') {
            i += 1;
        }
        if i == digits_start {
            return Err(self.error("expected a number"));
        }
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            let mut j = i + 1;
            if j < s.len() && (s[j] == b'-' || s[j] == b'+') {
                j += 1;
            }
            if j < s.len() && s[j].is_ascii_digit() {
                while j < s.len() && s[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        let text = std::str::from_utf8(&s[start..i]).expect("ascii");
        let v: f64 = text
            .parse()
            .map_err(|_| self.at(start, format!("malformed number `{text}`")))?;
        if !v.is_finite() {
            return Err(self.at(start, "number must be finite"));
        }
        self.pos = i;
        Ok(v)
    }

    fn expr(&mut self) -> Result<ParamFn> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            acc = acc + self.term()?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ParamFn> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc * self.factor()?;
            } else if self.eat(b'/') {
                acc = acc / self.factor()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<ParamFn> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let sigma = if self.eat(b'(') {
                let v = self.number()?;
                self.expect(b')')?;
                v
            } else {
                self.number()?
            };
            return Ok(base.powf(sigma));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<ParamFn> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                let v = self.number()?;
                ParamFn::constant(v).map_err(|e| self.at(start, e.to_string()))
            }
            Some(_) => {
                let start = self.pos;
                let name = self
                    .ident()
                    .ok_or_else(|| self.error("unexpected character"))?;
                if name == "t" {
                    return Ok(ParamFn::power(1.0));
                }
                self.expect(b'(')?;
                let f = self.call(&name, start)?;
                self.expect(b')')?;
                Ok(f)
            }
        }
    }

    fn comma(&mut self) -> Result<()> {
        self.expect(b',')
    }

    fn call(&mut self, name: &str, start: usize) -> Result<ParamFn> {
        let lift = |e: Error| match e {
            e @ Error::ExpressionParse { .. } => e,
            other => Error::ExpressionParse {
                column: start + 1,
                message: other.to_string(),
            },
        };
        match name {
            "const" => ParamFn::constant(self.number()?).map_err(lift),
            "pow" => Ok(ParamFn::power(self.number()?)),
            "logms" => {
                let mut rs = vec![self.number()?];
                while self.eat(b',') {
                    rs.push(self.number()?);
                }
                ParamFn::log_multiscale(&rs).map_err(lift)
            }
            "karamata" => {
                self.keyword("alpha")?;
                let alpha = self.alpha()?;
                self.comma()?;
                self.keyword("beta")?;
                let beta = self.beta()?;
                self.comma()?;
                self.keyword("r")?;
                let r = self.number()?;
                KaramataForm::new(alpha, beta, r)
                    .map(ParamFn::karamata)
                    .map_err(lift)
            }
            "compose" => {
                let outer = self.expr()?;
                self.comma()?;
                let inner = self.expr()?;
                Ok(ParamFn::compose(&outer, &inner))
            }
            "interp" => {
                let phi = self.expr()?;
                self.comma()?;
                let eps = self.number()?;
                self.comma()?;
                let delta = self.number()?;
                derived::interpolation_psi(&phi, eps, delta).map_err(lift)
            }
            "qsv" => {
                let chi = self.expr()?;
                self.comma()?;
                let theta = self.number()?;
                self.comma()?;
                let phi = self.expr()?;
                if !(theta >= 0.0) {
                    return Err(self.at(start, "qsv exponent must be >= 0"));
                }
                Ok(ParamFn::composition_qsv(&chi, theta, &phi))
            }
            "phis" => {
                let phi = self.expr()?;
                self.comma()?;
                let s = self.number()?;
                self.comma()?;
                let m = self.number()?;
                derived::phi_s(&phi, s, m).map_err(lift)
            }
            "clamp" => {
                let inner = self.expr()?;
                self.comma()?;
                let t0 = self.number()?;
                inner.clamp_below(t0).map_err(lift)
            }
            other => Err(self.at(start, format!("unknown function `{other}`"))),
        }
    }

    fn keyword(&mut self, key: &str) -> Result<()> {
        let here = self.pos;
        match self.ident() {
            Some(k) if k == key => self.expect(b'='),
            _ => Err(self.at(here, format!("expected `{key}=`"))),
        }
    }

    fn alpha(&mut self) -> Result<AlphaSpec> {
        let here = self.pos;
        let name = self
            .ident()
            .ok_or_else(|| self.error("expected alpha form"))?;
        if name == "zero" {
            return Ok(AlphaSpec::Zero);
        }
        self.expect(b'(')?;
        let spec = match name.as_str() {
            "inv_log" => AlphaSpec::InvLog { a: self.number()? },
            "sin_log" => AlphaSpec::SinLog { a: self.number()? },
            "inv_pow" => {
                let a = self.number()?;
                self.comma()?;
                AlphaSpec::InvPow {
                    a,
                    p: self.number()?,
                }
            }
            other => return Err(self.at(here, format!("unknown alpha form `{other}`"))),
        };
        self.expect(b')')?;
        Ok(spec)
    }

    fn beta(&mut self) -> Result<BetaSpec> {
        let here = self.pos;
        let name = self
            .ident()
            .ok_or_else(|| self.error("expected beta form"))?;
        self.expect(b'(')?;
        let spec = match name.as_str() {
            "const" => BetaSpec::Const { b: self.number()? },
            "sin_loglog" => BetaSpec::SinLogLog { b: self.number()? },
            "step" => {
                let b = self.number()?;
                self.comma()?;
                BetaSpec::Step {
                    b,
                    at: self.number()?,
                }
            }
            other => return Err(self.at(here, format!("unknown beta form `{other}`"))),
        };
        self.expect(b')')?;
        Ok(spec)
    }
}
