//! Parsing of ideals, weight vectors and matrices from command-line inputs.

use serde::Deserialize;

use khl_core::groebner::MonomialOrder;
use khl_core::ideals::{flag_ideal, grassmannian_ideal};
use khl_core::orders::{GroupOrder, WeightingMatrix};
use khl_core::{Ideal, KhlError, Polynomial, Result, VariableUniverse};

/// `{"variables": [...], "blocks": [...], "generators": [...]}`; `blocks`
/// defaults to a single block.
#[derive(Debug, Deserialize)]
struct IdealFile {
    variables: Vec<String>,
    #[serde(default)]
    blocks: Option<Vec<usize>>,
    generators: Vec<String>,
}

pub fn parse_ideal_json(text: &str) -> Result<Ideal> {
    let f: IdealFile = serde_json::from_str(text).map_err(|e| KhlError::Parse(e.to_string()))?;
    let blocks = f.blocks.unwrap_or_else(|| vec![f.variables.len()]);
    let u = VariableUniverse::new(f.variables, blocks)?;
    let gens = f.generators.iter().map(|g| Polynomial::parse(&u, g)).collect::<Result<Vec<_>>>()?;
    Ideal::new(&u, gens)
}

/// `gr:K,N`, `flag:N`, or a path to an ideal JSON file.
pub fn ideal_from_spec(spec: &str) -> Result<Ideal> {
    if let Some(rest) = spec.strip_prefix("gr:") {
        let v = parse_list::<usize>(rest)?;
        if v.len() != 2 {
            return Err(KhlError::Parse(format!("expected gr:K,N, got {}", spec)));
        }
        return Ok(grassmannian_ideal(v[0], v[1])?.1);
    }
    if let Some(rest) = spec.strip_prefix("flag:") {
        let n: usize = rest.trim().parse().map_err(|_| KhlError::Parse(format!("bad flag size {}", rest)))?;
        return Ok(flag_ideal(n)?.1);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| KhlError::Invalid(format!("{}: {}", spec, e)))?;
    parse_ideal_json(&text)
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|_| KhlError::Parse(format!("bad list entry {:?}", t))))
        .collect()
}

/// Whitespace- or comma-separated integer rows; `#` starts a comment.
pub fn parse_matrix_rows(text: &str) -> Result<Vec<Vec<i64>>> {
    let rows: Vec<Vec<i64>> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .filter(|l| !l.trim().is_empty())
        .map(parse_list::<i64>)
        .collect::<Result<_>>()?;
    if rows.is_empty() {
        return Err(KhlError::Parse("empty matrix".into()));
    }
    Ok(rows)
}

pub fn parse_order(s: &str) -> Result<GroupOrder> {
    match s {
        "lex" => Ok(GroupOrder::Lex),
        "sum-revlex" => Ok(GroupOrder::SumThenRevlexAsDisplayed),
        _ => Err(KhlError::Parse(format!("unknown order {:?} (lex, sum-revlex)", s))),
    }
}

pub fn parse_monomial_order(s: &str) -> Result<MonomialOrder> {
    match s {
        "degrevlex" => Ok(MonomialOrder::degrevlex()),
        "lex" => Ok(MonomialOrder::lex()),
        _ => Err(KhlError::Parse(format!("unknown monomial order {:?} (degrevlex, lex)", s))),
    }
}

pub fn read_matrix(path: &str, order: GroupOrder) -> Result<WeightingMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| KhlError::Invalid(format!("{}: {}", path, e)))?;
    WeightingMatrix::new(parse_matrix_rows(&text)?, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_text() {
        let m = parse_matrix_rows("# header\n1 2 3\n4,5,6 # tail\n\n").unwrap();
        assert_eq!(m, vec![vec![1, 2, 3], vec![4, 5, 6]]);
        assert!(parse_matrix_rows("1 x").is_err());
    }

    #[test]
    fn ideal_specs() {
        assert_eq!(ideal_from_spec("gr:2,4").unwrap().len(), 1);
        let i = parse_ideal_json(r#"{"variables": ["x", "y"], "generators": ["x^2 - y^2"]}"#).unwrap();
        assert_eq!(i.universe().len(), 2);
        assert!(ideal_from_spec("gr:2").is_err());
    }
}
