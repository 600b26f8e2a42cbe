//! Item and bin CSV files.
//!
//! Items: header `WIDTH,HEIGHT[,PROFIT][,COPIES][,ORIENTED]`, profit defaults
//! to the item area, copies to 1, oriented to 0. Bins: header
//! `WIDTH,HEIGHT[,COPIES]`; copies default to 1, except for bin packing where
//! a missing count means as many bins as needed. Header names are matched
//! case-insensitively, columns may come in any order, CRLF is accepted.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use guillotine_core::{BinCopies, BinType, ItemType, Objective};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing column {0}")]
    MissingColumn(&'static str),
    #[error("line {line}: bad {field} value '{value}'")]
    BadValue {
        line: u64,
        field: &'static str,
        value: String,
    },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

struct Table {
    headers: Vec<String>,
    rows: Vec<(u64, csv::StringRecord)>,
}

impl Table {
    fn read<R: Read>(reader: R) -> Result<Self, ParseError> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let headers = rdr
            .headers()?
            .iter()
            .map(|h| h.trim_start_matches('\u{feff}').to_ascii_uppercase())
            .collect();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            if rec.iter().all(|f| f.is_empty()) {
                continue;
            }
            let line = rec.position().map_or(0, |p| p.line());
            rows.push((line, rec));
        }
        Ok(Self { headers, rows })
    }

    fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    fn require(&self, name: &'static str) -> Result<usize, ParseError> {
        self.column(name).ok_or(ParseError::MissingColumn(name))
    }
}

fn field(rec: &csv::StringRecord, col: Option<usize>) -> Option<&str> {
    col.and_then(|c| rec.get(c)).filter(|v| !v.is_empty())
}

fn parse_int<T: std::str::FromStr>(
    line: u64,
    name: &'static str,
    value: &str,
) -> Result<T, ParseError> {
    value.parse().map_err(|_| ParseError::BadValue {
        line,
        field: name,
        value: value.to_string(),
    })
}

fn open(path: &Path) -> Result<File, ParseError> {
    File::open(path).map_err(|source| ParseError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse_items<R: Read>(reader: R) -> Result<Vec<ItemType>, ParseError> {
    let t = Table::read(reader)?;
    let (w, h) = (t.require("WIDTH")?, t.require("HEIGHT")?);
    let (p, c, o) = (t.column("PROFIT"), t.column("COPIES"), t.column("ORIENTED"));
    let mut items = Vec::with_capacity(t.rows.len());
    for (line, rec) in &t.rows {
        let line = *line;
        let width = parse_int(line, "WIDTH", field(rec, Some(w)).unwrap_or(""))?;
        let height = parse_int(line, "HEIGHT", field(rec, Some(h)).unwrap_or(""))?;
        let mut item = ItemType::new(items.len(), width, height);
        if let Some(v) = field(rec, p) {
            item = item.with_profit(parse_int(line, "PROFIT", v)?);
        }
        if let Some(v) = field(rec, c) {
            item = item.with_copies(parse_int(line, "COPIES", v)?);
        }
        if let Some(v) = field(rec, o) {
            let flag: u8 = parse_int(line, "ORIENTED", v)?;
            if flag > 1 {
                return Err(ParseError::BadValue {
                    line,
                    field: "ORIENTED",
                    value: v.to_string(),
                });
            }
            item = item.oriented(flag == 1);
        }
        items.push(item);
    }
    Ok(items)
}

pub fn parse_bins<R: Read>(reader: R, objective: Objective) -> Result<Vec<BinType>, ParseError> {
    let t = Table::read(reader)?;
    let (w, h) = (t.require("WIDTH")?, t.require("HEIGHT")?);
    let c = t.column("COPIES");
    let mut bins = Vec::with_capacity(t.rows.len());
    for (line, rec) in &t.rows {
        let line = *line;
        let width = parse_int(line, "WIDTH", field(rec, Some(w)).unwrap_or(""))?;
        let height = parse_int(line, "HEIGHT", field(rec, Some(h)).unwrap_or(""))?;
        let copies = match field(rec, c) {
            Some(v) if v.eq_ignore_ascii_case("inf") || v.eq_ignore_ascii_case("unbounded") => {
                BinCopies::Unbounded
            }
            Some(v) => BinCopies::Limited(parse_int(line, "COPIES", v)?),
            None if objective == Objective::BinPacking => BinCopies::Unbounded,
            None => BinCopies::Limited(1),
        };
        bins.push(BinType::new(bins.len(), width, height, copies));
    }
    Ok(bins)
}

pub fn read_items(path: &Path) -> Result<Vec<ItemType>, ParseError> {
    parse_items(open(path)?)
}

pub fn read_bins(path: &Path, objective: Objective) -> Result<Vec<BinType>, ParseError> {
    parse_bins(open(path)?, objective)
}

/// Items as CSV with every column present.
pub fn write_items(items: &[ItemType]) -> String {
    let mut out = String::from("WIDTH,HEIGHT,PROFIT,COPIES,ORIENTED\n");
    for it in items {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            it.width,
            it.height,
            it.profit,
            it.copies,
            u8::from(it.oriented)
        ));
    }
    out
}

pub fn write_bins(bins: &[BinType]) -> String {
    let mut out = String::from("WIDTH,HEIGHT,COPIES\n");
    for b in bins {
        let copies = match b.copies {
            BinCopies::Unbounded => "inf".to_string(),
            BinCopies::Limited(n) => n.to_string(),
        };
        out.push_str(&format!("{},{},{}\n", b.width, b.height, copies));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn items_with_defaults_and_crlf() {
        let csv = "width,HEIGHT,copies\r\n3,2,2\r\n5,1,\r\n";
        let items = parse_items(csv.as_bytes()).unwrap();
        assert_eq!(items.len(), 2);
        assert_eq!(items[0].profit, 6);
        assert_eq!(items[0].copies, 2);
        assert_eq!(items[1].copies, 1);
        assert!(!items[1].oriented);
    }

    #[test]
    fn all_item_columns() {
        let csv = "ORIENTED,PROFIT,WIDTH,HEIGHT,COPIES\n1,7,3,2,4\n";
        let it = &parse_items(csv.as_bytes()).unwrap()[0];
        assert_eq!((it.width, it.height, it.profit, it.copies, it.oriented), (3, 2, 7, 4, true));
    }

    #[test]
    fn bin_copy_defaults_depend_on_objective() {
        let csv = "WIDTH,HEIGHT\n10,8\n";
        let bpp = parse_bins(csv.as_bytes(), Objective::BinPacking).unwrap();
        assert_eq!(bpp[0].copies, BinCopies::Unbounded);
        let kp = parse_bins(csv.as_bytes(), Objective::Knapsack).unwrap();
        assert_eq!(kp[0].copies, BinCopies::Limited(1));
    }

    #[test]
    fn errors_name_the_problem() {
        assert!(matches!(
            parse_items("WIDTH\n3\n".as_bytes()),
            Err(ParseError::MissingColumn("HEIGHT"))
        ));
        let err = parse_items("WIDTH,HEIGHT\n3,x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::BadValue { line: 2, field: "HEIGHT", .. }), "{err}");
        assert!(parse_items("WIDTH,HEIGHT,ORIENTED\n3,1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn write_then_read_round_trips() {
        let items = vec![
            ItemType::new(0, 3, 2).with_profit(9).with_copies(2).oriented(true),
            ItemType::new(1, 1, 4),
        ];
        assert_eq!(parse_items(write_items(&items).as_bytes()).unwrap(), items);
        let bins = vec![
            BinType::new(0, 10, 5, BinCopies::Limited(3)),
            BinType::new(1, 6, 6, BinCopies::Unbounded),
        ];
        assert_eq!(parse_bins(write_bins(&bins).as_bytes(), Objective::Knapsack).unwrap(), bins);
    }
}
