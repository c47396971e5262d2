use clap::ValueEnum;
use quadtwist::arith::Valuation;
use quadtwist::verifier::TwistReport;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// Valuations as integers or the literal `inf`.
pub mod field {
    use quadtwist::arith::Valuation;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Valuation, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_field())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Valuation, D::Error> {
        let s = String::deserialize(d)?;
        Valuation::from_field(&s).ok_or_else(|| D::Error::custom(format!("bad valuation {s:?}")))
    }
}

/// One table row as written to CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub q: u64,
    pub sign: i8,
    #[serde(with = "field")]
    pub v2_aq_minus_2: Valuation,
    #[serde(with = "field")]
    pub v2_algebraic_part: Valuation,
    pub bound_applicable: i64,
    pub bound_uniform: i64,
    pub equality_flag: bool,
}

impl TableRow {
    pub fn from_report(r: &TwistReport) -> Self {
        let c = r.classes[0];
        TableRow {
            q: c.q,
            sign: c.sign,
            v2_aq_minus_2: c.i,
            v2_algebraic_part: r.actual,
            bound_applicable: r.bound.applicable,
            bound_uniform: r.bound.plus_formula,
            equality_flag: r.equality_condition_met,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut o = json!({
            "q": self.q,
            "sign": self.sign,
            "bound_applicable": self.bound_applicable,
            "bound_uniform": self.bound_uniform,
            "equality_flag": self.equality_flag,
        });
        put_valuation(&mut o, "v2_aq_minus_2", self.v2_aq_minus_2);
        put_valuation(&mut o, "v2_algebraic_part", self.v2_algebraic_part);
        o
    }
}

/// Writes `name` as an integer or null, and `name_infinite` as the flag.
pub fn put_valuation(o: &mut Value, name: &str, v: Valuation) {
    let map = o.as_object_mut().expect("object");
    map.insert(name.to_string(), v.finite().map_or(Value::Null, Value::from));
    map.insert(format!("{name}_infinite"), Value::Bool(v.is_infinite()));
}

pub fn csv_string(rows: &[TableRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record([
            "q",
            "sign",
            "v2_aq_minus_2",
            "v2_algebraic_part",
            "bound_applicable",
            "bound_uniform",
            "equality_flag",
        ])
        .expect("in-memory write");
    }
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn text_table(rows: &[TableRow]) -> String {
    let header = ["q", "sign", "v2(a_q-2)", "v2(L/Omega)", "bound", "uniform", "equality"];
    let body: Vec<[String; 7]> = rows
        .iter()
        .map(|r| {
            [
                r.q.to_string(),
                format!("{:+}", r.sign),
                r.v2_aq_minus_2.to_field(),
                r.v2_algebraic_part.to_field(),
                r.bound_applicable.to_string(),
                r.bound_uniform.to_string(),
                if r.equality_flag { "yes" } else { "" }.to_string(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &body {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = line(&header.map(String::from));
    out.push('\n');
    for row in &body {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_csv(text: &str) -> Result<Vec<TableRow>, csv::Error> {
        csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![
            TableRow {
                q: 11,
                sign: -1,
                v2_aq_minus_2: Valuation::Finite(2),
                v2_algebraic_part: Valuation::Infinity,
                bound_applicable: 1,
                bound_uniform: 2,
                equality_flag: false,
            },
            TableRow {
                q: 29,
                sign: 1,
                v2_aq_minus_2: Valuation::Finite(1),
                v2_algebraic_part: Valuation::Finite(1),
                bound_applicable: 1,
                bound_uniform: 1,
                equality_flag: true,
            },
        ];
        let text = csv_string(&rows);
        assert!(text.starts_with(
            "q,sign,v2_aq_minus_2,v2_algebraic_part,bound_applicable,bound_uniform,equality_flag\n"
        ));
        assert!(text.contains("11,-1,2,inf,1,2,false"));
        assert_eq!(parse_csv(&text).unwrap(), rows);
        assert_eq!(csv_string(&[]).lines().count(), 1);
    }

    #[test]
    fn json_infinity_is_null_with_flag() {
        let r = TableRow {
            q: 11,
            sign: -1,
            v2_aq_minus_2: Valuation::Finite(2),
            v2_algebraic_part: Valuation::Infinity,
            bound_applicable: 1,
            bound_uniform: 2,
            equality_flag: false,
        };
        let j = r.to_json();
        assert!(j["v2_algebraic_part"].is_null());
        assert_eq!(j["v2_algebraic_part_infinite"], true);
        assert_eq!(j["v2_aq_minus_2"], 2);
    }
}
