//! Named inequalities, each read as `expr ≥ 0`.

use std::fmt;

use crate::error::{Error, Result};
use crate::expr::InfoExpr;
use crate::functional::LinearFunctional;
use crate::ground::GroundSet;

#[derive(Clone, Debug, PartialEq)]
pub struct NamedInequality {
    pub name: String,
    pub expr: InfoExpr,
    pub note: String,
}

impl NamedInequality {
    pub fn ground_size(&self) -> usize {
        self.expr.ground().len()
    }

    pub fn ground(&self) -> &GroundSet {
        self.expr.ground()
    }

    pub fn functional(&self) -> LinearFunctional {
        self.expr.to_functional()
    }
}

impl fmt::Display for NamedInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}  >= 0", self.expr)
    }
}

/// Which Ingleton instance opens a five-variable inequality:
/// `[a,b,c,d]` or `[a,c,b,d]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bracket {
    First,
    Second,
}

impl Bracket {
    fn ingleton(self) -> &'static str {
        match self {
            Bracket::First => "[a,b,c,d]",
            Bracket::Second => "[a,c,b,d]",
        }
    }

    fn suffix(self) -> u8 {
        match self {
            Bracket::First => 1,
            Bracket::Second => 2,
        }
    }
}

fn ground(labels: &str) -> GroundSet {
    let names: Vec<&str> = labels.split_whitespace().collect();
    GroundSet::new(&names).expect("fixed labels are valid")
}

fn entry(name: &str, labels: &str, text: &str, note: &str) -> NamedInequality {
    NamedInequality {
        name: name.to_string(),
        expr: InfoExpr::parse(&ground(labels), text).expect("catalog text parses"),
        note: note.to_string(),
    }
}

const ABCD: &str = "a b c d";
const ABCDZ: &str = "a b c d z";
const ABCXY: &str = "a b c x y";

/// The five-variable family indexed by `k ≥ 0`.
pub fn fivek(k: u32, bracket: Bracket) -> NamedInequality {
    let k = k as u64;
    let mut text = String::new();
    if k > 0 {
        text.push_str(&format!("{k} {} + ", bracket.ingleton()));
    }
    let pairs = k * k.saturating_sub(1) / 2;
    if pairs > 0 {
        text.push_str(&format!("{pairs} (a,c|b) + {pairs} (b,c|a) + "));
    }
    text.push_str("(a,b|z)");
    if k > 0 {
        text.push_str(&format!(" + {k} (a,z|b) + {k} (b,z|a)"));
    }
    entry(
        &format!("fivek({k},{})", bracket.suffix()),
        ABCDZ,
        &text,
        "five-variable family obtained by induction from a maximum-entropy step",
    )
}

fn i_iv_3(top_b: bool, top_c: bool) -> NamedInequality {
    let b = if top_b { "(b,x|ac)" } else { "(b,y|ac)" };
    let c = if top_c { "(c,x|ab)" } else { "(c,y|ab)" };
    let name = format!("i-iv-3-{}{}", if top_b { 'x' } else { 'y' }, if top_c { 'x' } else { 'y' });
    entry(
        &name,
        ABCXY,
        &format!("(a,x|c) + (a,b|x) + (a,b|y) + (c,y) + {b} + {c} - (a,b)"),
        "maximum-entropy consequence of the partition x,y|abc",
    )
}

/// Fixed names; `fivek(k,v)` accepts any `k`.
pub fn list() -> Vec<String> {
    let mut out: Vec<String> = [
        "zy",
        "zy-strong-0.8",
        "mmrv",
        "mmrv-pair-1",
        "mmrv-pair-2",
        "ingleton",
        "i-iv-3-xx",
        "i-iv-3-xy",
        "i-iv-3-yx",
        "i-iv-3-yy",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for k in 0..4 {
        for b in [Bracket::First, Bracket::Second] {
            out.push(fivek(k, b).name);
        }
    }
    out
}

fn parse_fivek(args: &str) -> Option<NamedInequality> {
    let (k, v) = match args.split_once(',') {
        Some((k, v)) => (k.trim(), v.trim()),
        None => (args.trim(), "1"),
    };
    let k: u32 = k.parse().ok()?;
    let bracket = match v {
        "1" => Bracket::First,
        "2" => Bracket::Second,
        _ => return None,
    };
    Some(fivek(k, bracket))
}

fn parse_ingleton(args: &str) -> Option<NamedInequality> {
    let names: Vec<&str> = args.split(',').map(str::trim).collect();
    if names.len() != 4 {
        return None;
    }
    let g = GroundSet::new(&names).ok()?;
    let expr = InfoExpr::parse(&g, &format!("[{}]", names.join(","))).ok()?;
    Some(NamedInequality {
        name: format!("ingleton({})", names.join(",")),
        expr,
        note: "Ingleton expression".into(),
    })
}

pub fn get(name: &str) -> Result<NamedInequality> {
    let unknown = || Error::Invalid(format!("unknown inequality `{name}`"));
    let name = name.trim();
    if let Some(args) = name.strip_prefix("fivek(").and_then(|r| r.strip_suffix(')')) {
        return parse_fivek(args).ok_or_else(unknown);
    }
    if let Some(args) = name.strip_prefix("ingleton(").and_then(|r| r.strip_suffix(')')) {
        return parse_ingleton(args).ok_or_else(unknown);
    }
    Ok(match name {
        "zy" => entry(
            "zy",
            ABCD,
            "[a,b,c,d] + (a,b|c) + (a,c|b) + (b,c|a)",
            "four-variable inequality from one copy of c over ab",
        ),
        "zy-strong-0.8" => entry(
            "zy-strong-0.8",
            ABCD,
            "[a,b,c,d] + 0.8 (a,b|c) + (a,c|b) + (b,c|a)",
            "strengthening from the symmetric three-step copy sequence",
        ),
        "mmrv" => entry(
            "mmrv",
            ABCDZ,
            "[a,b,c,d] + (a,b|z) + (a,z|b) + (b,z|a) + 3 (cd,z|ab)",
            "five-variable Shannon inequality, a sum of 12 basic ones",
        ),
        "mmrv-pair-1" => NamedInequality {
            name: "mmrv-pair-1".into(),
            note: "first of the two five-variable inequalities from the partition cd,z|ab".into(),
            ..fivek(1, Bracket::First)
        },
        "mmrv-pair-2" => NamedInequality {
            name: "mmrv-pair-2".into(),
            note: "second of the two five-variable inequalities from the partition cd,z|ab".into(),
            ..fivek(1, Bracket::Second)
        },
        "ingleton" => NamedInequality {
            name: "ingleton".into(),
            ..parse_ingleton("a,b,c,d").expect("fixed labels")
        },
        "i-iv-3-xx" => i_iv_3(true, true),
        "i-iv-3-xy" => i_iv_3(true, false),
        "i-iv-3-yx" => i_iv_3(false, true),
        "i-iv-3-yy" => i_iv_3(false, false),
        _ => return Err(unknown()),
    })
}
