//! Reference values bundled with the binary.

use serde::{Deserialize, Serialize};

use khl_core::{KhlError, Result};

pub const TABLE1: &str = include_str!("../golden/table1.json");
pub const TABLE2: &str = include_str!("../golden/table2.json");
pub const EXAMPLES: &str = include_str!("../golden/examples.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table1 {
    pub source: String,
    pub n: usize,
    pub rows: Vec<Table1Row>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table1Row {
    pub word: String,
    pub class: String,
    /// The displayed vector −w.
    pub vector: Vec<i64>,
    pub mp: bool,
    pub prime: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table2 {
    pub source: String,
    pub k: usize,
    pub n: usize,
    /// Face labels in column order.
    pub columns: Vec<String>,
    /// Coefficients of e on the face columns.
    pub e_form: Vec<i64>,
    pub rows: Vec<Table2Row>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table2Row {
    pub subset: Vec<usize>,
    pub faces: Vec<i64>,
    pub deg: i64,
    pub e: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpotValue {
    pub source: String,
    pub word: String,
    pub subset: Vec<usize>,
    pub valuation: Vec<u32>,
    pub weight: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CollisionExample {
    pub source: String,
    pub word: String,
    pub first: Vec<Vec<usize>>,
    pub second: Vec<Vec<usize>>,
    pub value: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlowExample {
    pub source: String,
    pub subset: Vec<usize>,
    pub flows: usize,
    pub valuation: Vec<i64>,
    pub deg: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Gr36Weight {
    pub source: String,
    pub k: usize,
    pub n: usize,
    pub weight: Vec<i64>,
    pub monomial_free: bool,
    pub toric: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Examples {
    pub spot_value: SpotValue,
    pub collision: CollisionExample,
    pub flow_example: FlowExample,
    pub gr36_weight: Gr36Weight,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| KhlError::Parse(format!("{}: {}", what, e)))
}

pub fn table1(text: Option<&str>) -> Result<Table1> {
    parse(text.unwrap_or(TABLE1), "table1 golden data")
}

pub fn table2(text: Option<&str>) -> Result<Table2> {
    parse(text.unwrap_or(TABLE2), "table2 golden data")
}

pub fn examples(text: Option<&str>) -> Result<Examples> {
    parse(text.unwrap_or(EXAMPLES), "example golden data")
}
