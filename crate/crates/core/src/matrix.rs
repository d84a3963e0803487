//! Dense square complex matrices: the elements of the model algebra `M_n`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

/// An element of `M_n`, stored row-major in double precision.
///
/// All entries are finite by construction; the dimension is at least 1.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::DimensionMismatch(n * n, data.len()));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1);
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        m
    }

    pub fn diag_complex(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_complex(&self, c: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    /// `self + c * identity`.
    pub fn plus_identity(&self, c: f64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            let v = m.get(i, i);
            m.set(i, i, v + c);
        }
        m
    }

    /// Normalized trace `Tr(x) / n`.
    pub fn normalized_trace(&self) -> Complex64 {
        let sum: Complex64 = (0..self.n).map(|i| self.get(i, i)).sum();
        sum / self.n as f64
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `self - self*`.
    pub fn hermitian_residual(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let d = self.get(i, j) - self.get(j, i).conj();
                acc += d.norm_sqr();
            }
        }
        // Each off-diagonal deviation is counted from both sides.
        acc.sqrt()
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.hermitian_residual() <= rel_tol * self.frobenius_norm().max(f64::MIN_POSITIVE)
    }

    /// Block-diagonal sum. The normalized trace of the result is the
    /// dimension-weighted average of the summands' normalized traces.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        let mut m = Self::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                m.set(self.n + i, self.n + j, other.get(i, j));
            }
        }
        m
    }

    /// Assemble the 2x2 operator block `[[a, x], [x*, b]]`.
    pub fn block2(a: &Self, x: &Self, b: &Self) -> Result<Self> {
        let n = a.n;
        if x.n != n || b.n != n {
            return Err(Error::DimensionMismatch(n, x.n.max(b.n)));
        }
        let mut m = Self::zeros(2 * n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, a.get(i, j));
                m.set(i, n + j, x.get(i, j));
                m.set(n + i, j, x.get(j, i).conj());
                m.set(n + i, n + j, b.get(i, j));
            }
        }
        Ok(m)
    }

    /// Determinant by cofactor expansion. Exponential cost; intended as an
    /// independent cross-check for small dimensions only.
    pub fn det_cofactor(&self) -> Complex64 {
        fn det(n: usize, get: &dyn Fn(usize, usize) -> Complex64) -> Complex64 {
            if n == 1 {
                return get(0, 0);
            }
            let mut acc = Complex64::new(0.0, 0.0);
            let mut sign = 1.0;
            for col in 0..n {
                let minor = move |i: usize, j: usize| {
                    let jj = if j < col { j } else { j + 1 };
                    get(i + 1, jj)
                };
                acc += get(0, col) * sign * det(n - 1, &minor);
                sign = -sign;
            }
            acc
        }
        let f = |i: usize, j: usize| self.get(i, j);
        det(self.n, &f)
    }

    /// Text record: first line `n`, then `n` rows of `re im` pairs.
    /// Formatting is shortest-round-trip, so parsing recovers the exact
    /// double-precision values.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.n.to_string());
        out.push('\n');
        for i in 0..self.n {
            for j in 0..self.n {
                if j > 0 {
                    out.push(' ');
                }
                let z = self.get(i, j);
                out.push_str(&format!("{} {}", z.re, z.im));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut parser = TextParser::new(text);
        let m = parser.matrix()?;
        parser.finish()?;
        Ok(m)
    }
}

impl serde::Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

impl<'de> serde::Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        ComplexMatrix::from_text(&text).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            for j in 0..self.n {
                let z = self.get(i, j);
                write!(f, " {:+.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n);
        ComplexMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n);
        ComplexMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

/// Tokenizing parser for the matrix text format, tracking line/column for
/// error reporting. Also reused by the witness file parser.
pub(crate) struct TextParser<'a> {
    tokens: Vec<(usize, usize, &'a str)>,
    pos: usize,
}

impl<'a> TextParser<'a> {
    pub fn new(text: &'a str) -> Self {
        let mut tokens = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = match line.split_once('#') {
                Some((head, _)) => head,
                None => line,
            };
            let mut col = 0;
            for tok in line.split_whitespace() {
                // byte offset is close enough for diagnostics
                let start = line[col..].find(tok).map(|o| col + o).unwrap_or(col);
                tokens.push((lineno + 1, start + 1, tok));
                col = start + tok.len();
            }
        }
        Self { tokens, pos: 0 }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        let (line, column) = self
            .tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map(|&(l, c, _)| (l, c))
            .unwrap_or((1, 1));
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn next_token(&mut self) -> Result<&'a str> {
        let tok = self
            .tokens
            .get(self.pos)
            .map(|&(_, _, t)| t)
            .ok_or_else(|| self.err("unexpected end of input"))?;
        self.pos += 1;
        Ok(tok)
    }

    pub fn usize_token(&mut self) -> Result<usize> {
        let tok = self.next_token()?;
        tok.parse()
            .map_err(|_| self.err(format!("expected integer, got `{tok}`")))
    }

    pub fn f64_token(&mut self) -> Result<f64> {
        let tok = self.next_token()?;
        tok.parse()
            .map_err(|_| self.err(format!("expected number, got `{tok}`")))
    }

    pub fn matrix(&mut self) -> Result<ComplexMatrix> {
        let n = self.usize_token()?;
        if n == 0 {
            return Err(self.err("matrix dimension must be at least 1"));
        }
        let mut data = Vec::with_capacity(n * n);
        for _ in 0..n * n {
            let re = self.f64_token()?;
            let im = self.f64_token()?;
            data.push(Complex64::new(re, im));
        }
        ComplexMatrix::new(n, data)
    }

    pub fn finish(&self) -> Result<()> {
        if self.pos != self.tokens.len() {
            return Err(self.err("trailing input"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_trace_is_one() {
        let m = ComplexMatrix::identity(4);
        assert_eq!(m.normalized_trace(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn rejects_nan_entries() {
        let data = vec![Complex64::new(f64::NAN, 0.0); 1];
        assert!(ComplexMatrix::new(1, data).is_err());
    }

    #[test]
    fn direct_sum_trace_is_weighted_average() {
        let a = ComplexMatrix::diag(&[1.0]);
        let b = ComplexMatrix::diag(&[2.0]);
        let s = a.direct_sum(&b);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.get(0, 0).re, 1.0);
        assert_eq!(s.get(1, 1).re, 2.0);
        assert!((s.normalized_trace().re - 1.5).abs() < 1e-15);
    }

    #[test]
    fn text_round_trip_exact() {
        let m = ComplexMatrix::from_fn(3, |i, j| {
            Complex64::new((i as f64 + 0.1) / 3.0, -(j as f64) * 0.7 + 1e-17)
        });
        let back = ComplexMatrix::from_text(&m.to_text()).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn parse_error_carries_position() {
        match ComplexMatrix::from_text("2\n1 0 x 0\n0 0 1 0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn cofactor_det_of_triangular() {
        let mut m = ComplexMatrix::diag(&[2.0, 3.0, -1.0]);
        m.set(0, 2, Complex64::new(5.0, 1.0));
        let d = m.det_cofactor();
        assert!((d - Complex64::new(-6.0, 0.0)).norm() < 1e-12);
    }
}
