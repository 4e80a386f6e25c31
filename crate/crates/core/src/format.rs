//! Line-oriented text format for algebras and tensors.
//!
//! ```text
//! # comment
//! dim 3
//! basis x y z
//! bracket x y = z
//! metric identity
//! tensor S
//! 1 0 0
//! 0 1 0
//! 0 0 0
//! ```
//!
//! A bracket line also fills in the antisymmetric partner unless that pair is
//! given explicitly, so inconsistent pairs reach the validator intact.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::liealg::StructureConstants;
use crate::linalg::Matrix;
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Metric {
    Identity,
    /// Gram matrix of the basis; only usable in float mode.
    Gram(Matrix<Rational>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraFile {
    pub constants: StructureConstants<Rational>,
    pub metric: Metric,
    pub tensors: Vec<(String, Matrix<Rational>)>,
}

impl AlgebraFile {
    pub fn new(constants: StructureConstants<Rational>) -> Self {
        Self {
            constants,
            metric: Metric::Identity,
            tensors: Vec::new(),
        }
    }

    pub fn tensor(&self, name: &str) -> Option<&Matrix<Rational>> {
        self.tensors.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Self {
            inner: it.peekable(),
        }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        self.inner.next()
    }

    fn matrix_rows(
        &mut self,
        n: usize,
        header_line: usize,
        what: &str,
    ) -> Result<Matrix<Rational>, ParseError> {
        let mut rows = Vec::with_capacity(n);
        for r in 0..n {
            let (line, text) = self
                .next()
                .ok_or_else(|| err(header_line, format!("{what}: expected {n} rows, found {r}")))?;
            let row = text
                .split_whitespace()
                .map(|tok| {
                    parse_rational(tok).ok_or_else(|| err(line, format!("bad number '{tok}'")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != n {
                return Err(err(
                    line,
                    format!("{what}: expected {n} entries, found {}", row.len()),
                ));
            }
            rows.push(row);
        }
        Ok(Matrix::from_rows(rows))
    }
}

fn parse_terms(
    text: &str,
    line: usize,
    index_of: &dyn Fn(&str) -> Option<usize>,
) -> Result<Vec<(usize, Rational)>, ParseError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens == ["0"] {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    let mut i = 0;
    let mut first = true;
    while i < tokens.len() {
        let mut sign = Rational::one();
        let mut tok = tokens[i];
        if tok == "+" || tok == "-" {
            if tok == "-" {
                sign = -sign;
            }
            i += 1;
            tok = *tokens.get(i).ok_or_else(|| err(line, "dangling sign"))?;
        } else if !first && !tok.starts_with('-') {
            return Err(err(line, format!("expected '+' or '-' before '{tok}'")));
        }
        first = false;
        let (coeff, name) = if let Some(k) = index_of(tok) {
            (Rational::one(), k)
        } else if let Some(k) = tok.strip_prefix('-').and_then(index_of) {
            (-Rational::one(), k)
        } else {
            let c = parse_rational(tok)
                .ok_or_else(|| err(line, format!("unknown basis name or number '{tok}'")))?;
            i += 1;
            let name = *tokens
                .get(i)
                .ok_or_else(|| err(line, "coefficient without basis name"))?;
            let k =
                index_of(name).ok_or_else(|| err(line, format!("unknown basis name '{name}'")))?;
            (c, k)
        };
        terms.push((name, sign * coeff));
        i += 1;
    }
    Ok(terms)
}

pub fn parse(text: &str) -> Result<AlgebraFile, ParseError> {
    let mut lines = Lines::new(text);
    let (first_line, first) = lines.next().ok_or_else(|| err(1, "empty file"))?;
    let n: usize = match first.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["dim", n] => n
            .parse()
            .map_err(|_| err(first_line, format!("bad dimension '{n}'")))?,
        _ => return Err(err(first_line, "first directive must be 'dim N'")),
    };
    if n == 0 {
        return Err(err(first_line, "dimension must be positive"));
    }
    let mut constants = StructureConstants::<Rational>::new(n);
    let mut metric = Metric::Identity;
    let mut tensors: Vec<(String, Matrix<Rational>)> = Vec::new();
    let mut explicit: HashSet<(usize, usize)> = HashSet::new();
    let mut seen_basis = false;
    let mut seen_bracket = false;

    while let Some((line, text)) = lines.next() {
        let (directive, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let rest = rest.trim();
        match directive {
            "dim" => return Err(err(line, "duplicate 'dim'")),
            "basis" => {
                if seen_basis || seen_bracket {
                    return Err(err(line, "'basis' must appear once, before any bracket"));
                }
                let names: Vec<String> = rest.split_whitespace().map(str::to_owned).collect();
                if names.len() != n {
                    return Err(err(
                        line,
                        format!("expected {n} basis names, found {}", names.len()),
                    ));
                }
                let unique: HashSet<&String> = names.iter().collect();
                if unique.len() != n {
                    return Err(err(line, "duplicate basis name"));
                }
                if names
                    .iter()
                    .any(|s| parse_rational(s).is_some() || s.starts_with('-'))
                {
                    return Err(err(
                        line,
                        "basis names must not look like numbers or start with '-'",
                    ));
                }
                constants = constants.with_names(names);
                seen_basis = true;
            }
            "bracket" => {
                seen_bracket = true;
                let (lhs, rhs) = rest
                    .split_once('=')
                    .ok_or_else(|| err(line, "expected 'bracket a b = terms'"))?;
                let names = constants.names().to_vec();
                let index_of = |s: &str| names.iter().position(|m| m == s);
                let pair: Vec<&str> = lhs.split_whitespace().collect();
                let [a, b] = pair.as_slice() else {
                    return Err(err(line, "expected two basis names before '='"));
                };
                let i =
                    index_of(a).ok_or_else(|| err(line, format!("unknown basis name '{a}'")))?;
                let j =
                    index_of(b).ok_or_else(|| err(line, format!("unknown basis name '{b}'")))?;
                if !explicit.insert((i, j)) {
                    return Err(err(line, format!("bracket {a} {b} given twice")));
                }
                let terms = parse_terms(rhs, line, &index_of)?;
                let mut values = vec![Rational::zero(); n];
                for (k, c) in terms {
                    values[k] = values[k].clone() + c;
                }
                for (k, c) in values.into_iter().enumerate() {
                    if !explicit.contains(&(j, i)) {
                        constants.set(j, i, k, -c.clone());
                    }
                    constants.set(i, j, k, c);
                }
            }
            "metric" => match rest {
                "identity" => metric = Metric::Identity,
                "gram" => metric = Metric::Gram(lines.matrix_rows(n, line, "metric gram")?),
                other => return Err(err(line, format!("unknown metric '{other}'"))),
            },
            "tensor" => {
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(err(line, "expected 'tensor NAME'"));
                }
                if tensors.iter().any(|(name, _)| name == rest) {
                    return Err(err(line, format!("tensor '{rest}' given twice")));
                }
                let t = lines.matrix_rows(n, line, "tensor")?;
                if !t.is_symmetric() {
                    return Err(err(line, format!("tensor '{rest}' is not symmetric")));
                }
                tensors.push((rest.to_owned(), t));
            }
            other => return Err(err(line, format!("unknown directive '{other}'"))),
        }
    }
    Ok(AlgebraFile {
        constants,
        metric,
        tensors,
    })
}

fn emit_matrix(out: &mut String, m: &Matrix<Rational>) {
    for row in m.row_vecs() {
        let cells: Vec<String> = row.iter().map(format_rational).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
}

/// Canonical text; `parse(&emit(f)) == f` for every parsed `f`.
pub fn emit(file: &AlgebraFile) -> String {
    let c = &file.constants;
    let n = c.dim();
    let names = c.names();
    let mut out = String::new();
    let _ = writeln!(out, "dim {n}");
    let _ = writeln!(out, "basis {}", names.join(" "));
    for i in 0..n {
        for j in 0..n {
            if i == j && c.bracket_basis(i, j).iter().all(Scalar::is_zero) {
                continue;
            }
            let row = c.bracket_basis(i, j);
            let partner_matches = (0..n).all(|k| *c.get(j, i, k) == -row[k].clone());
            // The lower pair is implied by the upper one when antisymmetric.
            if i > j && partner_matches {
                continue;
            }
            if i < j && partner_matches && row.iter().all(Scalar::is_zero) {
                continue;
            }
            let mut rhs = String::new();
            for (k, v) in row.iter().enumerate().filter(|(_, v)| !Scalar::is_zero(*v)) {
                let negative = *v < Rational::zero();
                let mag = if negative { -v.clone() } else { v.clone() };
                let coeff = if mag == Rational::one() {
                    String::new()
                } else {
                    format!("{} ", format_rational(&mag))
                };
                if rhs.is_empty() {
                    let sign = if negative { "-" } else { "" };
                    if coeff.is_empty() {
                        rhs.push_str(&format!("{sign}{}", names[k]));
                    } else {
                        rhs.push_str(&format!("{sign}{coeff}{}", names[k]));
                    }
                } else {
                    let sign = if negative { "-" } else { "+" };
                    rhs.push_str(&format!(" {sign} {coeff}{}", names[k]));
                }
            }
            if rhs.is_empty() {
                rhs.push('0');
            }
            let _ = writeln!(out, "bracket {} {} = {rhs}", names[i], names[j]);
        }
    }
    match &file.metric {
        Metric::Identity => {
            let _ = writeln!(out, "metric identity");
        }
        Metric::Gram(g) => {
            let _ = writeln!(out, "metric gram");
            emit_matrix(&mut out, g);
        }
    }
    for (name, t) in &file.tensors {
        let _ = writeln!(out, "tensor {name}");
        emit_matrix(&mut out, t);
    }
    out
}

/// Skew generators for the doubling construction:
///
/// ```text
/// dim M
/// generator NAME
/// <M rows>
/// ```
pub fn parse_generators(text: &str) -> Result<Vec<Matrix<Rational>>, ParseError> {
    let mut lines = Lines::new(text);
    let (first_line, first) = lines.next().ok_or_else(|| err(1, "empty file"))?;
    let m: usize = match first.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["dim", m] => m
            .parse()
            .map_err(|_| err(first_line, format!("bad dimension '{m}'")))?,
        _ => return Err(err(first_line, "first directive must be 'dim M'")),
    };
    let mut out = Vec::new();
    while let Some((line, text)) = lines.next() {
        match text.split_whitespace().next() {
            Some("generator") => {
                let g = lines.matrix_rows(m, line, "generator")?;
                if !g.is_skew() {
                    return Err(err(line, "generator is not skew-symmetric"));
                }
                out.push(g);
            }
            _ => return Err(err(line, format!("unknown directive '{text}'"))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use proptest::prelude::*;

    const H1: &str = "# Heisenberg\ndim 3\nbasis x y z\nbracket x y = z\n";

    #[test]
    fn parses_heisenberg_and_fills_partner() {
        let f = parse(H1).unwrap();
        assert_eq!(f.constants.get(0, 1, 2), &int(1));
        assert_eq!(f.constants.get(1, 0, 2), &int(-1));
        assert_eq!(f.metric, Metric::Identity);
    }

    #[test]
    fn term_forms() {
        let text = "dim 4\nbracket e1 e2 = 1/2 e3 - e4\nbracket e1 e3 = -e4\nbracket e2 e3 = -0.5 e3 + 2 e4\nbracket e1 e4 = 0\n";
        let f = parse(text).unwrap();
        assert_eq!(
            f.constants.bracket_basis(0, 1),
            &[int(0), int(0), rat(1, 2), int(-1)]
        );
        assert_eq!(
            f.constants.bracket_basis(0, 2),
            &[int(0), int(0), int(0), int(-1)]
        );
        assert_eq!(
            f.constants.bracket_basis(1, 2),
            &[int(0), int(0), rat(-1, 2), int(2)]
        );
    }

    #[test]
    fn explicit_partner_is_kept() {
        let f = parse("dim 3\nbracket e1 e2 = e3\nbracket e2 e1 = e3\n").unwrap();
        assert_eq!(f.constants.get(1, 0, 2), &int(1));
        let again = parse(&emit(&f)).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse("dim 2\n\nfoo bar\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("unknown directive"));
        assert_eq!(parse("basis a b\n").unwrap_err().line, 1);
        assert_eq!(parse("dim 2\nbracket e1 e2 = 2 q\n").unwrap_err().line, 2);
        assert_eq!(parse("dim 2\ntensor S\n1 2\n3 4\n").unwrap_err().line, 2);
        assert_eq!(parse("dim 2\ntensor S\n1 0\n").unwrap_err().line, 2);
        assert_eq!(parse("dim 2\nbasis a\n").unwrap_err().line, 2);
    }

    #[test]
    fn gram_and_tensor_blocks() {
        let f = parse("dim 2\nmetric gram\n2 0\n0 1\ntensor S\n1 1/3\n1/3 0\n").unwrap();
        assert!(matches!(f.metric, Metric::Gram(_)));
        assert_eq!(f.tensor("S").unwrap()[(0, 1)], rat(1, 3));
        assert_eq!(parse(&emit(&f)).unwrap(), f);
    }

    #[test]
    fn emit_formats_terms() {
        let f = parse("dim 4\nbracket e1 e2 = -2 e3 + e4\nbracket e1 e3 = e4\n").unwrap();
        let text = emit(&f);
        assert!(text.contains("bracket e1 e2 = -2 e3 + e4\n"));
        assert!(text.contains("bracket e1 e3 = e4\n"));
        assert!(!text.contains("bracket e2 e1"));
    }

    #[test]
    fn generators_file() {
        let g = parse_generators("dim 2\ngenerator A\n0 -1\n1 0\n").unwrap();
        assert_eq!(g.len(), 1);
        assert!(parse_generators("dim 2\ngenerator A\n0 1\n1 0\n").is_err());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=4).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        #[test]
        fn emit_parse_roundtrip(
            n in 2usize..5,
            entries in proptest::collection::vec(small_rational(), 125),
            tensor in proptest::collection::vec(small_rational(), 25),
        ) {
            let mut c = StructureConstants::<Rational>::new(n);
            let mut idx = 0;
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        c.set(i, j, k, entries[idx].clone());
                        idx += 1;
                    }
                }
            }
            let t = Matrix::from_fn(n, n, |i, j| tensor[i.min(j) * 5 + i.max(j)].clone());
            let mut f = AlgebraFile::new(c);
            f.tensors.push(("T".into(), t));
            let text = emit(&f);
            prop_assert_eq!(parse(&text).unwrap(), f);
        }
    }
}
