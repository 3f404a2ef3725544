//! Machine-readable scan output.
//!
//! JSONL: one [`OutputRecord`] per line, fields in declaration order:
//! `d, D, kappa, h, cycle_sizes, forms, smallest_split_prime, rd, family,
//! verdicts, anomaly`. Verdict values are `pass`, `fail`, `vacuous` or `n/a`.
//!
//! CSV: the header is [`CSV_HEADER`]. List cells are `;`-separated
//! (`cycle_sizes` as `1;3`, `forms` as `1 -6 -1;2 -4 -3`), absent values are
//! empty cells.

use std::io::{self, Write};

use caliber_core::{ScanRecord, Verdict, Verdicts};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RdOut {
    pub n: i64,
    pub r: i64,
}

/// A [`Verdict`] serialized as its short string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerdictStr(pub Verdict);

impl Serialize for VerdictStr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.0.as_str())
    }
}

impl<'de> Deserialize<'de> for VerdictStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Verdict::parse(&s)
            .map(VerdictStr)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown verdict {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictsOut {
    pub sandwich: VerdictStr,
    pub lowerbound: VerdictStr,
    pub pow2: VerdictStr,
    pub kappa1_shape: VerdictStr,
    pub kappa2_shape: VerdictStr,
    pub splitprime: VerdictStr,
    pub fixtures: VerdictStr,
}

impl From<&Verdicts> for VerdictsOut {
    fn from(v: &Verdicts) -> Self {
        Self {
            sandwich: VerdictStr(v.sandwich),
            lowerbound: VerdictStr(v.lowerbound),
            pow2: VerdictStr(v.pow2),
            kappa1_shape: VerdictStr(v.kappa1_shape),
            kappa2_shape: VerdictStr(v.kappa2_shape),
            splitprime: VerdictStr(v.splitprime),
            fixtures: VerdictStr(v.fixtures),
        }
    }
}

impl VerdictsOut {
    fn as_array(&self) -> [Verdict; 7] {
        [
            self.sandwich.0,
            self.lowerbound.0,
            self.pow2.0,
            self.kappa1_shape.0,
            self.kappa2_shape.0,
            self.splitprime.0,
            self.fixtures.0,
        ]
    }
}

/// The stable on-disk shape of a [`ScanRecord`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputRecord {
    pub d: i64,
    #[serde(rename = "D")]
    pub disc: i64,
    pub kappa: usize,
    pub h: usize,
    pub cycle_sizes: Vec<usize>,
    pub forms: Vec<[i64; 3]>,
    pub smallest_split_prime: Option<u64>,
    pub rd: Option<RdOut>,
    pub family: String,
    pub verdicts: VerdictsOut,
    pub anomaly: bool,
}

impl From<&ScanRecord> for OutputRecord {
    fn from(r: &ScanRecord) -> Self {
        Self {
            d: r.d,
            disc: r.disc.get(),
            kappa: r.kappa,
            h: r.h,
            cycle_sizes: r.cycle_sizes.clone(),
            forms: r.forms.iter().map(|f| f.coefficients()).collect(),
            smallest_split_prime: r.smallest_split_prime,
            rd: r.rd.map(|rep| RdOut { n: rep.n, r: rep.r }),
            family: r.families.to_string(),
            verdicts: VerdictsOut::from(&r.verdicts),
            anomaly: r.anomaly,
        }
    }
}

impl OutputRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }
}

pub const CSV_HEADER: [&str; 18] = [
    "d",
    "D",
    "kappa",
    "h",
    "cycle_sizes",
    "forms",
    "smallest_split_prime",
    "rd_n",
    "rd_r",
    "family",
    "sandwich",
    "lowerbound",
    "pow2",
    "kappa1_shape",
    "kappa2_shape",
    "splitprime",
    "fixtures",
    "anomaly",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Jsonl,
    Csv,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "jsonl" => Some(Format::Jsonl),
            "csv" => Some(Format::Csv),
            _ => None,
        }
    }
}

/// Streams records in one of the supported formats.
pub enum RecordWriter<W: Write> {
    Jsonl(W),
    Csv(Box<csv::Writer<W>>),
}

impl<W: Write> RecordWriter<W> {
    pub fn new(format: Format, out: W) -> io::Result<Self> {
        Ok(match format {
            Format::Jsonl => RecordWriter::Jsonl(out),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(CSV_HEADER)?;
                RecordWriter::Csv(Box::new(w))
            }
        })
    }

    pub fn write(&mut self, record: &OutputRecord) -> io::Result<()> {
        match self {
            RecordWriter::Jsonl(w) => {
                serde_json::to_writer(&mut *w, record)?;
                w.write_all(b"\n")
            }
            RecordWriter::Csv(w) => Ok(w.write_record(csv_row(record))?),
        }
    }

    pub fn finish(self) -> io::Result<W> {
        match self {
            RecordWriter::Jsonl(mut w) => {
                w.flush()?;
                Ok(w)
            }
            RecordWriter::Csv(w) => w.into_inner().map_err(|e| e.into_error()),
        }
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// One CSV row in [`CSV_HEADER`] order.
pub fn csv_row(r: &OutputRecord) -> Vec<String> {
    let mut row = vec![
        r.d.to_string(),
        r.disc.to_string(),
        r.kappa.to_string(),
        r.h.to_string(),
        join(&r.cycle_sizes, ";"),
        join(r.forms.iter().map(|f| join(f, " ")), ";"),
        opt(r.smallest_split_prime),
        opt(r.rd.map(|rep| rep.n)),
        opt(r.rd.map(|rep| rep.r)),
        r.family.clone(),
    ];
    row.extend(r.verdicts.as_array().iter().map(|v| v.as_str().to_string()));
    row.push(r.anomaly.to_string());
    row
}
