//! Matrix input: Matrix Market files and a small JSON matrix format.

use std::fs;
use std::path::Path;

use matgamma_core::{CMat, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Reads a matrix from `path`, choosing the format by extension
/// (`.json` for JSON, anything else for Matrix Market).
pub fn read_matrix(path: &Path) -> Result<CMat, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        parse_json_matrix(&text)
    } else {
        parse_matrix_market(&text)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Layout {
    Array,
    Coordinate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
}

fn parse_err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse { line, message: message.into() }
}

/// Parses a dense or coordinate Matrix Market matrix. Complex data must be
/// declared with the `complex` field.
pub fn parse_matrix_market(text: &str) -> Result<CMat, CliError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let words: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(parse_err(hl, "expected '%%MatrixMarket matrix <layout> <field> <symmetry>'"));
    }
    let layout = match words[2].as_str() {
        "array" => Layout::Array,
        "coordinate" => Layout::Coordinate,
        w => return Err(parse_err(hl, format!("unsupported layout '{w}'"))),
    };
    let field = match words[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        w => return Err(parse_err(hl, format!("unsupported field '{w}'"))),
    };
    let symmetry = match words[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        "hermitian" => Symmetry::Hermitian,
        w => return Err(parse_err(hl, format!("unsupported symmetry '{w}'"))),
    };
    if symmetry == Symmetry::Hermitian && field != Field::Complex {
        return Err(parse_err(hl, "hermitian storage requires complex data"));
    }
    let mut data = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (sl, size) = data.next().ok_or_else(|| parse_err(hl, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|w| w.parse().map_err(|_| parse_err(sl, format!("bad size '{w}'"))))
        .collect::<Result<_, _>>()?;
    let (rows, cols, nnz) = match (layout, dims.as_slice()) {
        (Layout::Array, [r, c]) => (*r, *c, r * c),
        (Layout::Coordinate, [r, c, k]) => (*r, *c, *k),
        _ => return Err(parse_err(sl, "wrong number of size fields")),
    };
    if rows != cols || rows == 0 {
        return Err(parse_err(sl, "matrix must be square and nonempty"));
    }
    let n = rows;
    let width = if field == Field::Complex { 2 } else { 1 };
    let value = |line: usize, words: &[&str]| -> Result<C64, CliError> {
        let num = |w: &str| w.parse::<f64>().map_err(|_| parse_err(line, format!("bad number '{w}'")));
        let re = num(words[0])?;
        let im = if width == 2 { num(words[1])? } else { 0.0 };
        Ok(C64::new(re, im))
    };
    let mut a = CMat::zeros(n, n);
    let mut set = |i: usize, j: usize, z: C64| {
        a[(i, j)] = z;
        if i != j {
            match symmetry {
                Symmetry::General => {}
                Symmetry::Symmetric => a[(j, i)] = z,
                Symmetry::SkewSymmetric => a[(j, i)] = -z,
                Symmetry::Hermitian => a[(j, i)] = z.conj(),
            }
        }
    };
    match layout {
        Layout::Array => {
            // Column-major; symmetric variants list only the lower triangle.
            let mut slots = Vec::new();
            for j in 0..n {
                for i in 0..n {
                    let keep = match symmetry {
                        Symmetry::General => true,
                        Symmetry::SkewSymmetric => i > j,
                        _ => i >= j,
                    };
                    if keep {
                        slots.push((i, j));
                    }
                }
            }
            let mut last = sl;
            for &(i, j) in &slots {
                let (line, text) = data.next().ok_or_else(|| parse_err(last, "too few entries"))?;
                last = line;
                let words: Vec<&str> = text.split_whitespace().collect();
                if words.len() != width {
                    return Err(parse_err(line, format!("expected {width} value(s)")));
                }
                set(i, j, value(line, &words)?);
            }
        }
        Layout::Coordinate => {
            let mut last = sl;
            for _ in 0..nnz {
                let (line, text) = data.next().ok_or_else(|| parse_err(last, "too few entries"))?;
                last = line;
                let words: Vec<&str> = text.split_whitespace().collect();
                if words.len() != 2 + width {
                    return Err(parse_err(line, format!("expected 2 indices and {width} value(s)")));
                }
                let idx = |w: &str| match w.parse::<usize>() {
                    Ok(k) if (1..=n).contains(&k) => Ok(k - 1),
                    _ => Err(parse_err(line, format!("index '{w}' out of range"))),
                };
                let (i, j) = (idx(words[0])?, idx(words[1])?);
                set(i, j, value(line, &words[2..])?);
            }
        }
    }
    if let Some((line, _)) = data.next() {
        return Err(parse_err(line, "unexpected trailing data"));
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(parse_err(sl, "matrix entries must be finite"));
    }
    Ok(a)
}

/// Writes a general complex array Matrix Market file.
pub fn write_matrix_market(a: &CMat) -> String {
    let mut out = format!("%%MatrixMarket matrix array complex general\n{} {}\n", a.nrows(), a.ncols());
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let z = a[(i, j)];
            out.push_str(&format!("{:e} {:e}\n", z.re, z.im));
        }
    }
    out
}

/// A number given either as a JSON number or as a hexadecimal float string.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    #[serde(with = "hex_string")]
    Hex(f64),
}

impl Number {
    pub fn value(self) -> f64 {
        match self {
            Number::Float(x) | Number::Hex(x) => x,
        }
    }
}

mod hex_string {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&crate::hexfloat::format(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let s = String::deserialize(d)?;
        crate::hexfloat::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad hex float '{s}'")))
    }
}

/// JSON matrix: `{"real": [[...], ...], "imag": [[...], ...]}` with `imag`
/// optional. Entries are numbers or hexadecimal float strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JsonMatrix {
    pub real: Vec<Vec<Number>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imag: Option<Vec<Vec<Number>>>,
}

impl JsonMatrix {
    pub fn from_matrix(a: &CMat) -> Self {
        let part = |f: fn(&C64) -> f64| {
            (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| Number::Hex(f(&a[(i, j)]))).collect()).collect()
        };
        let imag = a.iter().any(|z| z.im != 0.0).then(|| part(|z| z.im));
        JsonMatrix { real: part(|z| z.re), imag }
    }

    pub fn to_matrix(&self) -> Result<CMat, CliError> {
        let n = self.real.len();
        let bad = |m: &str| CliError::Parse { line: 0, message: m.into() };
        if n == 0 || self.real.iter().any(|r| r.len() != n) {
            return Err(bad("JSON matrix must be square and nonempty"));
        }
        if let Some(im) = &self.imag {
            if im.len() != n || im.iter().any(|r| r.len() != n) {
                return Err(bad("imaginary part has a different shape"));
            }
        }
        let a = CMat::from_fn(n, n, |i, j| {
            let im = self.imag.as_ref().map_or(0.0, |m| m[i][j].value());
            C64::new(self.real[i][j].value(), im)
        });
        if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(bad("matrix entries must be finite"));
        }
        Ok(a)
    }
}

pub fn parse_json_matrix(text: &str) -> Result<CMat, CliError> {
    serde_json::from_str::<JsonMatrix>(text)?.to_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn array_real() {
        let a = parse_matrix_market("%%MatrixMarket matrix array real general\n% c\n2 2\n1\n3\n2\n4\n").unwrap();
        assert_eq!(a[(0, 1)], C64::new(2.0, 0.0));
        assert_eq!(a[(1, 0)], C64::new(3.0, 0.0));
    }

    #[test]
    fn coordinate_symmetric() {
        let a = parse_matrix_market("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 5\n2 1 7\n").unwrap();
        assert_eq!(a[(0, 1)], C64::new(7.0, 0.0));
        assert_eq!(a[(1, 1)], C64::new(0.0, 0.0));
    }

    #[test]
    fn complex_requires_qualifier() {
        let err = parse_matrix_market("%%MatrixMarket matrix array real general\n1 1\n1 2\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 3, .. }), "{err}");
        let a = parse_matrix_market("%%MatrixMarket matrix array complex general\n1 1\n1 2\n").unwrap();
        assert_eq!(a[(0, 0)], C64::new(1.0, 2.0));
    }

    #[test]
    fn errors_carry_lines() {
        let err = parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 3, .. }));
        assert!(parse_matrix_market("hello").is_err());
    }

    #[test]
    fn writer_round_trips() {
        let a = CMat::from_fn(3, 3, |i, j| C64::new(0.1 * (i + 2 * j) as f64, -(i as f64) / 3.0));
        assert_eq!(parse_matrix_market(&write_matrix_market(&a)).unwrap(), a);
    }

    #[test]
    fn json_matrix() {
        let a = parse_json_matrix(r#"{"real": [[1, "0x1.8p+1"], [0, 2]]}"#).unwrap();
        assert_eq!(a[(0, 1)], C64::new(3.0, 0.0));
        let b = CMat::from_fn(2, 2, |i, j| C64::new(0.1 + i as f64, 1.0 / 3.0 * j as f64));
        let text = serde_json::to_string(&JsonMatrix::from_matrix(&b)).unwrap();
        assert_eq!(parse_json_matrix(&text).unwrap(), b);
    }
}
