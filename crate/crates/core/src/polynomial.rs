//! Dense univariate polynomial arithmetic over `f64` coefficients, plus a
//! small expression parser for command-line input of potentials.
//!
//! A [`Polynomial`] stores its coefficients densely: index `i` holds the
//! coefficient of `x^i`. Every constructor and operation returns the
//! canonical form, in which the last stored coefficient is nonzero (the zero
//! polynomial stores nothing and reports a degree of `None`). Only
//! coefficients that are exactly `0.0` are trimmed; numerically tiny values
//! produced by arithmetic are kept, because downstream solvers treat them as
//! meaningful data.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Largest accepted exponent in parsed expressions. Degrees in this toolkit
/// are small; the cap exists so a typo cannot allocate a gigantic vector.
const MAX_PARSED_EXPONENT: usize = 1000;

/// Symmetry classification of a polynomial under `x -> -x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    /// All odd-index coefficients are zero (includes the zero polynomial).
    Even,
    /// All even-index coefficients are zero and the polynomial is nonzero.
    Odd,
    /// Mixed: at least one nonzero coefficient of each parity.
    None,
}

/// Dense real-coefficient univariate polynomial in canonical form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<f64>", into = "Vec<f64>")]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Builds a polynomial from coefficients (index = power), trimming
    /// trailing coefficients that are exactly zero.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    /// The constant polynomial `c`.
    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    /// The monomial `c * x^power`.
    pub fn monomial(power: usize, c: f64) -> Self {
        if c == 0.0 {
            return Polynomial::zero();
        }
        let mut coeffs = vec![0.0; power + 1];
        coeffs[power] = c;
        Polynomial { coeffs }
    }

    /// Canonical coefficient slice (empty for the zero polynomial).
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `x^power`; zero beyond the stored degree.
    pub fn coefficient(&self, power: usize) -> f64 {
        self.coeffs.get(power).copied().unwrap_or(0.0)
    }

    /// Degree of the polynomial, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// True exactly for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation at `x`. Exact for degree <= 1.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Power-rule derivative, in canonical form.
    pub fn differentiate(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * i as f64)
            .collect();
        Polynomial::new(coeffs)
    }

    /// Coefficient convolution. `degree(p*q) = degree(p) + degree(q)` when
    /// both factors are nonzero (leading coefficients cannot cancel).
    pub fn multiply(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }

    /// Multiplication by a scalar.
    pub fn scale(&self, factor: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    /// Parity classification. The zero polynomial is classified `Even`.
    pub fn parity(&self) -> Parity {
        let odd_all_zero = self.coeffs.iter().skip(1).step_by(2).all(|&c| c == 0.0);
        if odd_all_zero {
            return Parity::Even;
        }
        let even_all_zero = self.coeffs.iter().step_by(2).all(|&c| c == 0.0);
        if even_all_zero {
            Parity::Odd
        } else {
            Parity::None
        }
    }
}

impl From<Vec<f64>> for Polynomial {
    fn from(coeffs: Vec<f64>) -> Self {
        Polynomial::new(coeffs)
    }
}

impl From<Polynomial> for Vec<f64> {
    fn from(p: Polynomial) -> Self {
        p.coeffs
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.coefficient(i) + rhs.coefficient(i))
            .collect();
        Polynomial::new(coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.coefficient(i) - rhs.coefficient(i))
            .collect();
        Polynomial::new(coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.multiply(rhs)
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

/// Renders the polynomial in a form `parse_potential` accepts, lowest power
/// first, e.g. `-5*x^2+x^4`. Coefficients use the shortest decimal string
/// that round-trips, so `parse_potential(p.to_string())` reproduces `p`
/// exactly.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (power, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if first {
                if c < 0.0 {
                    f.write_str("-")?;
                }
                first = false;
            } else if c < 0.0 {
                f.write_str("-")?;
            } else {
                f.write_str("+")?;
            }
            let magnitude = c.abs();
            if power == 0 {
                write!(f, "{magnitude}")?;
            } else {
                if magnitude != 1.0 {
                    write!(f, "{magnitude}*")?;
                }
                f.write_str("x")?;
                if power > 1 {
                    write!(f, "^{power}")?;
                }
            }
        }
        Ok(())
    }
}

/// Error produced by [`parse_potential`], annotated with the byte offset
/// (0-based) where parsing failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

/// Parses an expression such as `x^4 - 5*x^2` into a [`Polynomial`].
///
/// Grammar: `expr := term (("+"|"-") term)*` with
/// `term := coeff | coeff "*"? var | var`, `var := "x" ("^" uint)?`, and
/// `coeff` a decimal literal (optional fraction and exponent part).
/// Whitespace between tokens is ignored and a single leading minus is
/// allowed; parentheses are not supported. Terms with equal powers are
/// summed, so the result does not depend on term order.
pub fn parse_potential(text: &str) -> Result<Polynomial, ParseError> {
    let mut scanner = Scanner {
        bytes: text.as_bytes(),
        pos: 0,
    };
    scanner.skip_ws();
    if scanner.at_end() {
        return Err(ParseError::new(scanner.pos, "empty input"));
    }
    let mut coeffs: Vec<f64> = Vec::new();
    let mut sign = if scanner.consume(b'-') { -1.0 } else { 1.0 };
    loop {
        scanner.skip_ws();
        let (power, value) = parse_term(&mut scanner)?;
        if power >= coeffs.len() {
            coeffs.resize(power + 1, 0.0);
        }
        coeffs[power] += sign * value;
        scanner.skip_ws();
        match scanner.peek() {
            None => break,
            Some(b'+') => sign = 1.0,
            Some(b'-') => sign = -1.0,
            Some(c) => {
                return Err(ParseError::new(
                    scanner.pos,
                    format!("expected '+' or '-', found '{}'", c as char),
                ));
            }
        }
        scanner.pos += 1;
    }
    Ok(Polynomial::new(coeffs))
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Scanner<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn consume(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }
}

fn parse_term(scanner: &mut Scanner) -> Result<(usize, f64), ParseError> {
    match scanner.peek() {
        None => Err(ParseError::new(scanner.pos, "expected a term")),
        Some(b'x') => {
            scanner.pos += 1;
            let power = parse_optional_exponent(scanner)?;
            Ok((power, 1.0))
        }
        Some(c) if c.is_ascii_digit() || c == b'.' => {
            let value = scan_number(scanner)?;
            scanner.skip_ws();
            if scanner.consume(b'*') {
                scanner.skip_ws();
                if !scanner.consume(b'x') {
                    return Err(ParseError::new(scanner.pos, "expected 'x' after '*'"));
                }
                let power = parse_optional_exponent(scanner)?;
                Ok((power, value))
            } else if scanner.consume(b'x') {
                let power = parse_optional_exponent(scanner)?;
                Ok((power, value))
            } else {
                Ok((0, value))
            }
        }
        Some(c) => Err(ParseError::new(
            scanner.pos,
            format!("unexpected character '{}'", c as char),
        )),
    }
}

fn parse_optional_exponent(scanner: &mut Scanner) -> Result<usize, ParseError> {
    scanner.skip_ws();
    if !scanner.consume(b'^') {
        return Ok(1);
    }
    scanner.skip_ws();
    if scanner.peek() == Some(b'-') {
        return Err(ParseError::new(scanner.pos, "negative exponent"));
    }
    let start = scanner.pos;
    while matches!(scanner.peek(), Some(c) if c.is_ascii_digit()) {
        scanner.pos += 1;
    }
    if scanner.pos == start {
        return Err(ParseError::new(
            scanner.pos,
            "expected a nonnegative integer exponent",
        ));
    }
    if scanner.peek() == Some(b'.') {
        return Err(ParseError::new(scanner.pos, "non-integer exponent"));
    }
    let digits = std::str::from_utf8(&scanner.bytes[start..scanner.pos]).expect("ascii digits");
    let power: usize = digits
        .parse()
        .map_err(|_| ParseError::new(start, "exponent too large"))?;
    if power > MAX_PARSED_EXPONENT {
        return Err(ParseError::new(
            start,
            format!("exponent too large (limit {MAX_PARSED_EXPONENT})"),
        ));
    }
    Ok(power)
}

fn scan_number(scanner: &mut Scanner) -> Result<f64, ParseError> {
    let start = scanner.pos;
    let mut digits = 0usize;
    while matches!(scanner.peek(), Some(c) if c.is_ascii_digit()) {
        scanner.pos += 1;
        digits += 1;
    }
    if scanner.consume(b'.') {
        while matches!(scanner.peek(), Some(c) if c.is_ascii_digit()) {
            scanner.pos += 1;
            digits += 1;
        }
    }
    if digits == 0 {
        return Err(ParseError::new(start, "expected a number"));
    }
    // Optional exponent part of the literal, e.g. `2.5e-3`.
    if matches!(scanner.peek(), Some(b'e') | Some(b'E')) {
        let mark = scanner.pos;
        scanner.pos += 1;
        if matches!(scanner.peek(), Some(b'+') | Some(b'-')) {
            scanner.pos += 1;
        }
        let mut exp_digits = 0usize;
        while matches!(scanner.peek(), Some(c) if c.is_ascii_digit()) {
            scanner.pos += 1;
            exp_digits += 1;
        }
        if exp_digits == 0 {
            // Not an exponent part after all (e.g. the `e` of a later token);
            // leave it for the caller.
            scanner.pos = mark;
        }
    }
    let raw = std::str::from_utf8(&scanner.bytes[start..scanner.pos]).expect("ascii number");
    let value: f64 = raw
        .parse()
        .map_err(|_| ParseError::new(start, format!("invalid number '{raw}'")))?;
    if !value.is_finite() {
        return Err(ParseError::new(
            start,
            format!("coefficient '{raw}' overflows f64"),
        ));
    }
    Ok(value)
}
