//! Text formats for polymatroids and functionals.
//!
//! ```text
//! base: a b c d
//! a 2
//! ab 3/2
//! ```
//! Comments start with `#`. A polymatroid file must list every non-empty
//! subset; a functional file may omit subsets (coefficient 0).

use std::collections::HashSet;

use num_traits::{Signed, Zero};

use crate::error::{parse_err, Result};
use crate::functional::LinearFunctional;
use crate::ground::{GroundSet, Subset};
use crate::num::{parse_rational, Rational};
use crate::poly::{Polymatroid, SetFunction};

/// Non-empty lines without comments, with their 1-based line numbers.
pub fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// Parse a `base:` header line into a ground set.
pub fn parse_base(line_no: usize, line: &str) -> Result<GroundSet> {
    let rest = line
        .strip_prefix("base:")
        .ok_or_else(|| parse_err(line_no, "expected `base:` header"))?;
    let labels: Vec<&str> = rest.split_whitespace().collect();
    GroundSet::new(&labels).map_err(|e| parse_err(line_no, e.to_string()))
}

fn parse_entries(text: &str) -> Result<(GroundSet, Vec<(usize, Subset, Rational)>)> {
    let mut lines = content_lines(text);
    let (ln, head) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let ground = parse_base(ln, head)?;
    let mut out = Vec::new();
    for (ln, line) in lines {
        let (name, value) = line
            .rsplit_once(char::is_whitespace)
            .ok_or_else(|| parse_err(ln, "expected `<subset> <value>`"))?;
        let s = ground
            .parse_subset(name.trim())
            .map_err(|e| parse_err(ln, e.to_string()))?;
        if s.is_empty() {
            return Err(parse_err(ln, "empty subset"));
        }
        let v = parse_rational(value).map_err(|e| parse_err(ln, e.to_string()))?;
        out.push((ln, s, v));
    }
    Ok((ground, out))
}

pub fn parse_polymatroid(text: &str) -> Result<Polymatroid> {
    let (ground, entries) = parse_entries(text)?;
    let mut seen = HashSet::new();
    let mut f = Polymatroid::zero(ground.clone());
    let mut last = 1;
    for (ln, s, v) in entries {
        if !seen.insert(s) {
            return Err(parse_err(ln, format!("subset {} given twice", ground.name(s))));
        }
        if v.is_negative() {
            return Err(parse_err(ln, "negative rank"));
        }
        f.set(s, v);
        last = ln;
    }
    if let Some(missing) = ground.nonempty_subsets().find(|s| !seen.contains(s)) {
        return Err(parse_err(
            last,
            format!("missing subset {}", ground.name(missing)),
        ));
    }
    Ok(f)
}

pub fn parse_functional(text: &str) -> Result<LinearFunctional> {
    let (ground, entries) = parse_entries(text)?;
    let mut seen = HashSet::new();
    let mut e = LinearFunctional::zero(ground.clone());
    for (ln, s, v) in entries {
        if !seen.insert(s) {
            return Err(parse_err(ln, format!("subset {} given twice", ground.name(s))));
        }
        e.add_term(s, v);
    }
    Ok(e)
}

fn subset_label(g: &GroundSet, s: Subset) -> String {
    if g.single_char_labels() {
        g.name(s)
    } else {
        s.elements().map(|i| g.label(i)).collect::<Vec<_>>().join(",")
    }
}

pub fn write_polymatroid(f: &Polymatroid) -> String {
    let g = f.ground();
    let mut out = format!("base: {g}\n");
    for s in g.nonempty_subsets() {
        out.push_str(&format!("{} {}\n", subset_label(g, s), f.at(s)));
    }
    out
}

pub fn write_functional(e: &LinearFunctional) -> String {
    let g = e.ground();
    let mut out = format!("base: {g}\n");
    for (s, c) in e.coeffs() {
        if !c.is_zero() {
            out.push_str(&format!("{} {}\n", subset_label(g, s), c));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;
    use crate::shannon::vamos_vector;

    #[test]
    fn round_trip() {
        let g = GroundSet::letters(4).unwrap();
        let v = vamos_vector(&g, g.parse_subset("cd").unwrap()).unwrap();
        let text = write_polymatroid(&v);
        assert_eq!(parse_polymatroid(&text).unwrap(), v);
    }

    #[test]
    fn missing_subset_is_error() {
        let e = parse_polymatroid("base: a b\na 1\nb 1\n").unwrap_err();
        assert!(e.to_string().contains("missing subset ab"));
    }

    #[test]
    fn functional_with_comments() {
        let e = parse_functional("# H(a|b)\nbase: a b\nab 1  # joint\nb -1\n").unwrap();
        assert_eq!(e.coeff(Subset(3)), rat(1));
        assert_eq!(e.coeff(Subset(2)), rat(-1));
        assert_eq!(parse_functional(&write_functional(&e)).unwrap(), e);
    }

    #[test]
    fn multi_char_labels_round_trip() {
        let g = GroundSet::new(&["a1", "b1", "a2"]).unwrap();
        let f = crate::shannon::free_vector(&g);
        assert_eq!(parse_polymatroid(&write_polymatroid(&f)).unwrap(), f);
    }
}
