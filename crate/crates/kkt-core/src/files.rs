//! Input file formats consumed by the CLI.
//!
//! Clover and linking-form files are JSON documents with rationals as
//! strings `"p/q"` (positive denominator); the realization input is a plain
//! text matrix file: the size `n` on the first line, then `n` rows of
//! whitespace-separated rational entries. Indices in files are 1-based.

use serde::Deserialize;

use crate::casson::ComplementaryClover;
use crate::clover::{CloverData, Piece, TrilinearForm};
use crate::error::Error;
use crate::linkform::LinkingForm;
use crate::rat::{parse_rational, Rational};

#[derive(Debug, Deserialize)]
pub struct FormEntryFile {
    pub triple: [usize; 3],
    pub value: String,
}

#[derive(Debug, Deserialize)]
pub struct PieceFile {
    pub genus: usize,
    #[serde(default)]
    pub form: Vec<FormEntryFile>,
}

#[derive(Debug, Deserialize)]
pub struct LinkingEntryFile {
    pub i: usize,
    pub j: usize,
    pub matrix: Vec<Vec<String>>,
}

/// Clover file: `{"pieces": [{genus, form: [{triple, value}]}], "linking":
/// [{i, j, matrix}]}`.
#[derive(Debug, Deserialize)]
pub struct CloverFile {
    pub pieces: Vec<PieceFile>,
    #[serde(default)]
    pub linking: Vec<LinkingEntryFile>,
}

/// Complementary-clover file: a genus and two form blocks.
#[derive(Debug, Deserialize)]
pub struct ComplementaryFile {
    pub genus: usize,
    #[serde(default)]
    pub form_a: Vec<FormEntryFile>,
    #[serde(default)]
    pub form_b: Vec<FormEntryFile>,
}

/// Linking-form file: `{"orders": [n1, ...], "gram": [["p/q", ...], ...]}`.
#[derive(Debug, Deserialize)]
pub struct LinkformFile {
    pub orders: Vec<u64>,
    pub gram: Vec<Vec<String>>,
}

fn rational_at(s: &str, location: &str) -> Result<Rational, Error> {
    parse_rational(s).map_err(|e| Error::validation(format!("{location}: {e}")))
}

/// `location` is the path of the entry list itself, e.g. `pieces[0].form`.
fn form_from_entries(
    genus: usize,
    entries: &[FormEntryFile],
    location: &str,
) -> Result<TrilinearForm, Error> {
    let mut form = TrilinearForm::new(genus);
    for (t, e) in entries.iter().enumerate() {
        let value = rational_at(&e.value, &format!("{location}[{t}].value"))?;
        form.set((e.triple[0], e.triple[1], e.triple[2]), value)
            .map_err(|err| Error::validation(format!("{location}[{t}]: {err}")))?;
    }
    Ok(form)
}

pub fn parse_clover(text: &str) -> Result<CloverData, Error> {
    let file: CloverFile = serde_json::from_str(text)
        .map_err(|e| Error::validation(format!("clover file: {e}")))?;
    let mut pieces = Vec::with_capacity(file.pieces.len());
    for (idx, p) in file.pieces.iter().enumerate() {
        let form = form_from_entries(p.genus, &p.form, &format!("pieces[{idx}].form"))?;
        pieces.push(Piece {
            genus: p.genus,
            form,
        });
    }
    let mut linking = Vec::with_capacity(file.linking.len());
    for (t, entry) in file.linking.iter().enumerate() {
        if entry.i == 0 || entry.j == 0 {
            return Err(Error::validation(format!(
                "linking[{t}]: piece indices are 1-based"
            )));
        }
        let matrix: Vec<Vec<Rational>> = entry
            .matrix
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(|(c, s)| rational_at(s, &format!("linking[{t}].matrix[{r}][{c}]")))
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        linking.push((entry.i - 1, entry.j - 1, matrix));
    }
    CloverData::new(pieces, linking)
}

pub fn parse_complementary(text: &str) -> Result<ComplementaryClover, Error> {
    let file: ComplementaryFile = serde_json::from_str(text)
        .map_err(|e| Error::validation(format!("complementary clover file: {e}")))?;
    let a = form_from_entries(file.genus, &file.form_a, "form_a")?;
    let b = form_from_entries(file.genus, &file.form_b, "form_b")?;
    ComplementaryClover::new(file.genus, a, b)
}

pub fn parse_linkform(text: &str) -> Result<LinkingForm, Error> {
    let file: LinkformFile = serde_json::from_str(text)
        .map_err(|e| Error::validation(format!("linking form file: {e}")))?;
    let gram: Vec<Vec<Rational>> = file
        .gram
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, s)| rational_at(s, &format!("gram[{r}][{c}]")))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    LinkingForm::new(file.orders, gram)
}

/// Matrix file: first line `n`, then `n` rows of rational entries.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<Rational>>, Error> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| Error::validation("matrix file: missing size line".to_string()))?
        .trim()
        .parse()
        .map_err(|_| Error::validation("matrix file: bad size line".to_string()))?;
    let mut rows = Vec::with_capacity(n);
    for r in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::validation(format!("matrix file: missing row {}", r + 1)))?;
        let row: Vec<Rational> = line
            .split_whitespace()
            .enumerate()
            .map(|(c, s)| rational_at(s, &format!("row {} entry {}", r + 1, c + 1)))
            .collect::<Result<_, _>>()?;
        if row.len() != n {
            return Err(Error::validation(format!(
                "matrix file: row {} has {} entries, expected {n}",
                r + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    if lines.next().is_some() {
        return Err(Error::validation(format!(
            "matrix file: more than {n} rows"
        )));
    }
    Ok(rows)
}
