//! Text formats: polynomial expressions, twist lists, monad files and
//! group-element files. Printers are canonical, so `print(parse(print(x)))`
//! is byte-identical to `print(x)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sheafmonad::autgroup::GroupElement;
use sheafmonad::polymat::{FreeSheaf, GradedMatrix, HomogPoly, Monomial};
use sheafmonad::scalar::{parse_literal, Field, FieldElement};
use sheafmonad::Monad;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> ParseError {
        ParseError { line, message: message.into() }
    }
}

type Sparse = BTreeMap<Vec<u32>, FieldElement>;

struct Expr<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
    field: Field,
}

impl Expr<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, String> {
        Err(format!("at column {}: {}", self.pos + 1, msg.into()))
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn constant(&self, c: FieldElement) -> Sparse {
        let mut s = Sparse::new();
        if !c.is_zero() {
            s.insert(vec![0; self.n + 1], c);
        }
        s
    }

    fn expr(&mut self) -> Result<Sparse, String> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { add(acc, &rhs, false) } else { add(acc, &rhs, true) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Sparse, String> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = mul(&acc, &rhs);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Sparse, String> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let e: u32 = match self.digits().parse() {
            Ok(e) if e <= 64 => e,
            _ => return self.err("expected an exponent in 0..=64"),
        };
        let mut out = self.constant(self.field.one());
        for _ in 0..e {
            out = mul(&out, &base);
        }
        Ok(out)
    }

    fn unary(&mut self) -> Result<Sparse, String> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let v = self.unary()?;
                Ok(v.into_iter().map(|(k, c)| (k, -&c)).collect())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn atom(&mut self) -> Result<Sparse, String> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'x') => {
                self.pos += 1;
                let i: usize = match self.digits().parse() {
                    Ok(i) => i,
                    Err(_) => return self.err("expected a variable index after 'x'"),
                };
                if i > self.n {
                    return self.err(format!("variable x{i} outside x0..x{}", self.n));
                }
                let mut e = vec![0; self.n + 1];
                e[i] = 1;
                Ok(Sparse::from([(e, self.field.one())]))
            }
            Some(c) if c.is_ascii_digit() => {
                let mut lit = self.digits().to_string();
                if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    let den = self.digits();
                    if den.is_empty() {
                        return self.err("expected a denominator after '/'");
                    }
                    lit = format!("{lit}/{den}");
                }
                match parse_literal(&lit, self.field) {
                    Ok(c) => Ok(self.constant(c)),
                    Err(e) => self.err(e.to_string()),
                }
            }
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
            None => self.err("unexpected end of expression"),
        }
    }
}

fn add(mut acc: Sparse, rhs: &Sparse, negate: bool) -> Sparse {
    for (k, c) in rhs {
        let c = if negate { -c } else { c.clone() };
        let v = match acc.remove(k) {
            Some(old) => &old + &c,
            None => c,
        };
        if !v.is_zero() {
            acc.insert(k.clone(), v);
        }
    }
    acc
}

fn mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let k: Vec<u32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
            let term = Sparse::from([(k, ca * cb)]);
            out = add(out, &term, false);
        }
    }
    out
}

/// Parses a homogeneous polynomial in `x0..xn`. The zero polynomial takes
/// the given `degree`; otherwise every term must have that degree when it
/// is `Some`.
pub fn parse_poly(s: &str, n: usize, field: Field, degree: Option<i64>) -> Result<HomogPoly, String> {
    let mut p = Expr { src: s.as_bytes(), pos: 0, n, field };
    let sparse = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    let degrees: std::collections::BTreeSet<i64> =
        sparse.keys().map(|e| e.iter().map(|&x| x as i64).sum()).collect();
    let d = match (degrees.len(), degree) {
        (0, Some(d)) => d,
        (0, None) => 0,
        (1, Some(d)) if degrees.contains(&d) => d,
        (1, None) => *degrees.first().unwrap(),
        (1, Some(d)) => {
            return Err(format!("'{}' has degree {}, expected {d}", s.trim(), degrees.first().unwrap()))
        }
        _ => return Err(format!("'{}' is not homogeneous", s.trim())),
    };
    HomogPoly::from_terms(n, d, field, sparse.into_iter().map(|(e, c)| (Monomial::new(e), c)))
        .map_err(|e| e.to_string())
}

fn write_monomial(out: &mut String, m: &Monomial) {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        let _ = write!(out, "x{i}");
        if e > 1 {
            let _ = write!(out, "^{e}");
        }
    }
}

/// Canonical text: terms in descending monomial order, `c*x0^2*x1` style,
/// unit coefficients dropped, `0` for the zero polynomial.
pub fn print_poly(p: &HomogPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        let abs = if neg { -c } else { c.clone() };
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if m.degree() == 0 {
            let _ = write!(out, "{abs}");
        } else {
            if !abs.is_one() {
                let _ = write!(out, "{abs}*");
            }
            write_monomial(&mut out, m);
        }
    }
    out
}

pub fn parse_twists(s: &str) -> Result<Vec<i64>, String> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| format!("twist list '{s}' must be in square brackets"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| format!("bad twist '{}'", t.trim())))
        .collect()
}

pub fn print_twists(t: &[i64]) -> String {
    let parts: Vec<String> = t.iter().map(i64::to_string).collect();
    format!("[{}]", parts.join(","))
}

pub fn print_field(f: Field) -> String {
    f.to_string()
}

pub fn parse_field(s: &str) -> Result<Field, String> {
    let s = s.trim();
    if s == "Q" {
        return Ok(Field::Rational);
    }
    let p = s
        .strip_prefix("Fp:")
        .ok_or_else(|| format!("field '{s}' must be Q or Fp:<p>"))?
        .parse::<u64>()
        .map_err(|_| format!("bad modulus in '{s}'"))?;
    Field::prime(p).map_err(|e| e.to_string())
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    at: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim_end_matches('\r')))
            .collect();
        Lines { lines, at: 0 }
    }

    /// Next line that is not blank once `#` comments are cut off.
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        while let Some(&(no, l)) = self.lines.get(self.at) {
            self.at += 1;
            let t = l.trim();
            if !t.is_empty() {
                return Some((no, t));
            }
        }
        None
    }

    fn peek_content(&mut self) -> Option<(usize, &'a str)> {
        let save = self.at;
        let r = self.next_content();
        self.at = save;
        r
    }

    /// The next raw line, blank lines included (an empty row of a matrix
    /// with no columns).
    fn next_raw(&mut self) -> Option<(usize, &'a str)> {
        let r = self.lines.get(self.at).copied();
        self.at += 1;
        r.map(|(no, l)| (no, l.trim()))
    }

    fn last_line(&self) -> usize {
        self.lines.last().map_or(0, |l| l.0)
    }
}

fn parse_header(lines: &mut Lines) -> Result<(usize, Field), ParseError> {
    let (no, l) = lines.next_content().ok_or_else(|| ParseError::new(1, "empty input"))?;
    let rest = l.strip_prefix("P ").ok_or_else(|| ParseError::new(no, "expected header 'P <n> over <field>'"))?;
    let (n, field) = rest
        .split_once(" over ")
        .ok_or_else(|| ParseError::new(no, "expected header 'P <n> over <field>'"))?;
    let n: usize = n.trim().parse().map_err(|_| ParseError::new(no, "bad ambient dimension"))?;
    let field = parse_field(field).map_err(|m| ParseError::new(no, m))?;
    Ok((n, field))
}

fn keyed<'a>(no: usize, l: &'a str, key: &str) -> Result<&'a str, ParseError> {
    l.strip_prefix(key)
        .and_then(|r| r.strip_prefix(' '))
        .map(str::trim)
        .ok_or_else(|| ParseError::new(no, format!("expected '{key} ...'")))
}

fn index_colon(no: usize, s: &str) -> Result<(i64, &str), ParseError> {
    let (i, rest) = s.split_once(':').ok_or_else(|| ParseError::new(no, "expected '<index>:'"))?;
    let i = i.trim().parse().map_err(|_| ParseError::new(no, format!("bad index '{}'", i.trim())))?;
    Ok((i, rest.trim()))
}

fn parse_rows(
    lines: &mut Lines,
    source: &FreeSheaf,
    target: &FreeSheaf,
    field: Field,
) -> Result<GradedMatrix, ParseError> {
    let n = source.ambient();
    let mut rows = Vec::with_capacity(target.rank());
    for (i, &f) in target.twists().iter().enumerate() {
        let (no, l) = lines
            .next_raw()
            .ok_or_else(|| ParseError::new(lines.last_line(), "matrix ends early"))?;
        let cells: Vec<&str> = if l.is_empty() { Vec::new() } else { l.split(';').collect() };
        if cells.len() != source.rank() {
            return Err(ParseError::new(no, format!("row {i} has {} entries, expected {}", cells.len(), source.rank())));
        }
        let row = cells
            .iter()
            .zip(source.twists())
            .map(|(c, e)| parse_poly(c, n, field, Some(f - e)).map_err(|m| ParseError::new(no, m)))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    GradedMatrix::new(source.clone(), target.clone(), field, rows).map_err(|e| ParseError::new(lines.last_line(), e.to_string()))
}

fn print_rows(out: &mut String, m: &GradedMatrix) {
    for i in 0..m.rows() {
        let cells: Vec<String> = m.row_entries(i).iter().map(print_poly).collect();
        out.push_str(&cells.join("; "));
        out.push('\n');
    }
}

/// Text form of a monad; see [`parse_monad`].
pub fn print_monad(m: &Monad) -> String {
    let mut out = format!("P {} over {}\n", m.ambient(), print_field(m.field()));
    for i in m.indices() {
        let _ = writeln!(out, "term {i}: {}", print_twists(m.term(i).unwrap().twists()));
    }
    for i in m.lo()..m.hi() {
        let _ = writeln!(out, "diff {i}:");
        print_rows(&mut out, m.diff(i).unwrap());
    }
    let _ = writeln!(out, "codim {}", m.codim());
    let _ = writeln!(out, "cohomology_at {}", m.cohomology_at());
    out
}

/// Reads
///
/// ```text
/// P <n> over Q|Fp:<p>
/// term <i>: [e_1,...,e_k]        (consecutive indices)
/// diff <i>:                      (one block per consecutive pair)
/// <target-rank rows of ';'-separated polynomials>
/// codim <c>
/// cohomology_at <i>
/// ```
///
/// `#` starts a comment running to the end of the line. Blank lines are
/// skipped except inside a `diff` block, where an empty row stands for a
/// map out of the zero sheaf.
pub fn parse_monad(text: &str) -> Result<Monad, ParseError> {
    let mut lines = Lines::new(text);
    let (n, field) = parse_header(&mut lines)?;
    let mut terms: Vec<(i64, FreeSheaf)> = Vec::new();
    while let Some((no, l)) = lines.peek_content() {
        if !l.starts_with("term ") {
            break;
        }
        lines.next_content();
        let (i, rest) = index_colon(no, keyed(no, l, "term")?)?;
        if let Some((last, _)) = terms.last() {
            if i != last + 1 {
                return Err(ParseError::new(no, format!("term {i} does not follow term {last}")));
            }
        }
        let tw = parse_twists(rest).map_err(|m| ParseError::new(no, m))?;
        terms.push((i, FreeSheaf::new(n, tw)));
    }
    let Some(&(lo, _)) = terms.first() else {
        return Err(ParseError::new(lines.last_line(), "no terms"));
    };
    let mut diffs = Vec::new();
    for k in 0..terms.len() - 1 {
        let (no, l) = lines.next_content().ok_or_else(|| ParseError::new(lines.last_line(), "missing diff block"))?;
        let (i, rest) = index_colon(no, keyed(no, l, "diff")?)?;
        if i != lo + k as i64 || !rest.is_empty() {
            return Err(ParseError::new(no, format!("expected 'diff {}:'", lo + k as i64)));
        }
        diffs.push(parse_rows(&mut lines, &terms[k].1, &terms[k + 1].1, field)?);
    }
    let (no, l) = lines.next_content().ok_or_else(|| ParseError::new(lines.last_line(), "missing codim"))?;
    let codim: usize = keyed(no, l, "codim")?.parse().map_err(|_| ParseError::new(no, "bad codim"))?;
    let (no, l) = lines.next_content().ok_or_else(|| ParseError::new(lines.last_line(), "missing cohomology_at"))?;
    let pos: i64 = keyed(no, l, "cohomology_at")?
        .parse()
        .map_err(|_| ParseError::new(no, "bad cohomology_at"))?;
    if let Some((no, _)) = lines.next_content() {
        return Err(ParseError::new(no, "trailing input"));
    }
    Monad::new(n, field, lo, terms.into_iter().map(|t| t.1).collect(), diffs, codim, pos)
        .map_err(|e| ParseError::new(no, e.to_string()))
}

/// Text form of a group element: header, then `block <i>: [twists]`
/// followed by the rows of that automorphism.
pub fn print_group(g: &GroupElement, n: usize, field: Field) -> String {
    let mut out = format!("P {n} over {}\n", print_field(field));
    for (k, b) in g.blocks().iter().enumerate() {
        let _ = writeln!(out, "block {}: {}", g.lo() + k as i64, print_twists(b.source().twists()));
        print_rows(&mut out, b);
    }
    out
}

pub struct ParsedGroup {
    pub n: usize,
    pub field: Field,
    pub element: GroupElement,
}

pub fn parse_group(text: &str) -> Result<ParsedGroup, ParseError> {
    let mut lines = Lines::new(text);
    let (n, field) = parse_header(&mut lines)?;
    let mut lo = None;
    let mut blocks = Vec::new();
    while let Some((no, l)) = lines.next_content() {
        let (i, rest) = index_colon(no, keyed(no, l, "block")?)?;
        let expected = lo.map(|lo: i64| lo + blocks.len() as i64).unwrap_or(i);
        if i != expected {
            return Err(ParseError::new(no, format!("expected block {expected}")));
        }
        lo.get_or_insert(i);
        let s = FreeSheaf::new(n, parse_twists(rest).map_err(|m| ParseError::new(no, m))?);
        blocks.push(parse_rows(&mut lines, &s, &s, field)?);
    }
    let lo = lo.ok_or_else(|| ParseError::new(lines.last_line(), "no blocks"))?;
    let element = GroupElement::new(lo, blocks).map_err(|e| ParseError::new(lines.last_line(), e.to_string()))?;
    Ok(ParsedGroup { n, field, element })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn poly_round_trip() {
        for s in ["x0*x2 - x1^2", "-3/7*x0 + 2*x3", "0", "5", "-x1", "x0^3 + x0*x1*x2 - 1/2*x3^3"] {
            let p = parse_poly(s, 3, Q, None).unwrap();
            assert_eq!(print_poly(&p), s);
        }
    }

    #[test]
    fn poly_grammar() {
        let p = parse_poly(" (x0 + x1)^2 - x0 * (x0 + 2*x1) ", 2, Q, None).unwrap();
        assert_eq!(print_poly(&p), "x1^2");
        assert_eq!(print_poly(&parse_poly("-x0^2*x1", 2, Q, None).unwrap()), "-x0^2*x1");
        assert_eq!(print_poly(&parse_poly("(-x0)^2", 2, Q, None).unwrap()), "x0^2");
        let z = parse_poly("x0 - x0", 2, Q, Some(1)).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.degree(), 1);
        let f = Field::prime(7).unwrap();
        assert_eq!(print_poly(&parse_poly("1/3*x0", 2, f, None).unwrap()), "5*x0");
        assert_eq!(print_poly(&parse_poly("-x0", 2, f, None).unwrap()), "6*x0");
        assert!(parse_poly("x0 + 1", 2, Q, None).is_err());
        assert!(parse_poly("x3", 2, Q, None).is_err());
        assert!(parse_poly("x0 +", 2, Q, None).is_err());
        assert!(parse_poly("x0", 2, Q, Some(2)).is_err());
        assert!(parse_poly("1/0", 2, Q, None).is_err());
        assert!(parse_poly("x0 x1", 2, Q, None).is_err());
    }

    #[test]
    fn twists() {
        assert_eq!(parse_twists("[-1, -2,-2]").unwrap(), vec![-1, -2, -2]);
        assert_eq!(parse_twists("[]").unwrap(), Vec::<i64>::new());
        assert_eq!(print_twists(&[-4, -3]), "[-4,-3]");
        assert!(parse_twists("-1,2").is_err());
    }

    #[test]
    fn monad_text() {
        let text = "P 2 over Q\nterm -1: [-1]\nterm 0: [0]\ndiff -1:\nx0\ncodim 1\ncohomology_at 0\n";
        let m = parse_monad(text).unwrap();
        assert_eq!(print_monad(&m), text);
        let empty = "P 2 over Fp:7\nterm 0: []\nterm 1: [0]\ndiff 0:\n\ncodim 1\ncohomology_at 1\n";
        assert_eq!(print_monad(&parse_monad(empty).unwrap()), empty);
        assert!(parse_monad("P 2 over Q\nterm 0: [0]\nterm 2: [0]\n").is_err());
        assert!(parse_monad("P 2 over R\n").is_err());
        assert!(parse_monad("P 2 over Q\nterm -1: [-1]\nterm 0: [0]\ndiff -1:\nx0^2\ncodim 1\ncohomology_at 0\n").is_err());
    }
}
