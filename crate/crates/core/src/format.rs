//! JSON interchange: presentations, classification parameters, hom
//! solutions and filtrations. Polynomials are written in the text grammar of
//! [`Vars`], so a written file re-parses to an equal value.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::morphisms::{Filtration, HomSolution};
use crate::normalform::CanonParams;
use crate::poly::{Rat, Vars};
use crate::presentation::{Grading, Mat2, Presentation};
use crate::superlie::BasisIndex;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<u32>,
    pub m: usize,
    pub n: usize,
    pub grading: String,
    #[serde(rename = "E")]
    pub e: BTreeMap<String, [[String; 2]; 2]>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

/// 1-based line and column of byte offset `pos`.
fn line_col(text: &str, pos: usize) -> (usize, usize) {
    let before = &text[..pos];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(pos, |nl| pos - nl - 1) + 1;
    (line, col)
}

/// Where the entry string `value` of generator `key` starts, if it can be found.
fn locate(text: &str, key: &str, value: &str) -> Option<usize> {
    let k = text.find(&format!("\"{key}\""))?;
    let quoted = serde_json::to_string(value).ok()?;
    text[k..].find(&quoted).map(|off| k + off + 1)
}

pub fn presentation_to_file(p: &Presentation) -> PresentationFile {
    let vars = p.vars();
    PresentationFile {
        version: Some(FORMAT_VERSION),
        m: p.m,
        n: p.n,
        grading: p.grading.as_str().into(),
        e: p
            .generators()
            .map(|(x, mat)| (x.to_string(), mat.format(&vars)))
            .collect(),
    }
}

fn quoted(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

/// Canonical JSON with one generator per line and a trailing newline.
pub fn presentation_to_json(p: &Presentation) -> String {
    let file = presentation_to_file(p);
    let mut out = String::from("{\n");
    if let Some(v) = file.version {
        out.push_str(&format!("  \"version\": {v},\n"));
    }
    out.push_str(&format!("  \"m\": {},\n  \"n\": {},\n", file.m, file.n));
    out.push_str(&format!("  \"grading\": {},\n", quoted(&file.grading)));
    let rows: Vec<String> = file
        .e
        .iter()
        .map(|(k, [r0, r1])| {
            format!(
                "    {}: [[{}, {}], [{}, {}]]",
                quoted(k),
                quoted(&r0[0]),
                quoted(&r0[1]),
                quoted(&r1[0]),
                quoted(&r1[1])
            )
        })
        .collect();
    if rows.is_empty() {
        out.push_str("  \"E\": {}\n}\n");
    } else {
        out.push_str(&format!("  \"E\": {{\n{}\n  }}\n}}\n", rows.join(",\n")));
    }
    out
}

/// Parses a presentation file; grammar errors carry the line and column in `text`.
pub fn presentation_from_json(text: &str) -> Result<Presentation> {
    let file: PresentationFile = serde_json::from_str(text).map_err(json_error)?;
    if let Some(v) = file.version {
        if v != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "format version {v} not supported (expected {FORMAT_VERSION})"
            )));
        }
    }
    let grading = Grading::parse(&file.grading)?;
    let mut p = Presentation::new(file.m, file.n, grading)?;
    let vars = p.vars();
    for (key, rows) in &file.e {
        let x: BasisIndex = key.parse()?;
        let mut entries = Vec::with_capacity(4);
        for row in rows {
            for s in row {
                let poly = vars.parse(s).map_err(|e| match e {
                    Error::Parse { column, message } => {
                        let at = locate(text, key, s).map(|pos| line_col(text, pos + column - 1));
                        match at {
                            Some((line, col)) => Error::Format(format!(
                                "{key}: line {line}, column {col}: {message}"
                            )),
                            None => Error::Format(format!("{key}: column {column} of \"{s}\": {message}")),
                        }
                    }
                    other => other,
                })?;
                entries.push(poly);
            }
        }
        let mut it = entries.into_iter();
        let mat = Mat2::new(
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
        );
        p.set(x, mat)?;
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub a: Vec<String>,
    #[serde(rename = "S")]
    pub s: Vec<usize>,
    pub bar: bool,
}

pub fn params_to_json(c: &CanonParams) -> String {
    let file = ParamsFile {
        a: c.a.iter().map(|x| x.to_string()).collect(),
        s: c.s.iter().copied().collect(),
        bar: c.bar,
    };
    serde_json::to_string(&file).expect("serializable")
}

pub fn params_from_json(text: &str) -> Result<CanonParams> {
    let file: ParamsFile = serde_json::from_str(text).map_err(json_error)?;
    let a = file
        .a
        .iter()
        .map(|s| s.trim().parse::<Rat>().map_err(|e| Error::Format(format!("bad rational '{s}': {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let s: BTreeSet<usize> = file.s.into_iter().collect();
    if s.iter().any(|&i| i == 0 || i > a.len()) {
        return Err(Error::Format(format!("S must be a subset of 1..{}", a.len())));
    }
    Ok(CanonParams { a, s, bar: file.bar })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomFile {
    pub matrix: [[String; 2]; 2],
    pub parity: String,
}

pub fn homs_to_json(sols: &[HomSolution], vars: &Vars) -> String {
    let files: Vec<HomFile> = sols
        .iter()
        .map(|s| HomFile {
            matrix: s.w.format(vars),
            parity: s.parity.as_str().into(),
        })
        .collect();
    serde_json::to_string_pretty(&files).expect("serializable")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationStep {
    /// Coefficients of `F_k` in increasing degree.
    pub coefficients: Vec<String>,
    /// A vector of this step missing from the next one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separator: Option<[String; 2]>,
}

pub fn filtration_to_json(f: &Filtration, vars: &Vars) -> String {
    let steps: Vec<FiltrationStep> = f
        .steps
        .iter()
        .enumerate()
        .map(|(k, s)| FiltrationStep {
            coefficients: s.coefficients().iter().map(|c| c.to_string()).collect(),
            separator: f
                .separators
                .get(k)
                .map(|v| [vars.format(&v.f[0]), vars.format(&v.f[1])]),
        })
        .collect();
    serde_json::to_string_pretty(&steps).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalform::rationals;
    use crate::presentation::build_mas;

    #[test]
    fn round_trip_is_exact() {
        let s = BTreeSet::from([2]);
        let p = build_mas(3, &rationals(&[1, -2, 5]), &s).unwrap();
        let text = presentation_to_json(&p);
        let q = presentation_from_json(&text).unwrap();
        assert_eq!(p, q);
        assert_eq!(presentation_to_json(&q), text);
        let generic: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(generic["E"]["e[2,b1]"][0][1], "-2*h2");
    }

    #[test]
    fn golden_sl11_file() {
        let p = build_mas(1, &rationals(&[2]), &BTreeSet::new()).unwrap();
        let want = "{\n  \"version\": 1,\n  \"m\": 1,\n  \"n\": 1,\n  \"grading\": \"g11\",\n  \"E\": {\n    \"e[1,b1]\": [[\"0\", \"2\"], [\"0\", \"0\"]],\n    \"e[b1,1]\": [[\"0\", \"0\"], [\"1/2*h1\", \"0\"]]\n  }\n}\n";
        assert_eq!(presentation_to_json(&p), want);
    }

    #[test]
    fn rejects_unknown_keys_and_versions() {
        let base = r#"{"m": 1, "n": 1, "grading": "ungraded", "E": {}}"#;
        assert!(presentation_from_json(base).is_ok());
        let extra = r#"{"m": 1, "n": 1, "grading": "ungraded", "E": {}, "x": 1}"#;
        assert!(presentation_from_json(extra).is_err());
        let v2 = r#"{"version": 2, "m": 1, "n": 1, "grading": "ungraded", "E": {}}"#;
        let err = presentation_from_json(v2).unwrap_err().to_string();
        assert!(err.contains("version"), "{err}");
    }

    #[test]
    fn grammar_errors_have_positions() {
        let text = "{\"m\": 1, \"n\": 1, \"grading\": \"ungraded\",\n \"E\": {\"e[1,b1]\": [[\"0\", \"h1 +\"], [\"0\", \"0\"]]}}";
        let err = presentation_from_json(text).unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        assert!(err.contains("column 31"), "{err}");
    }

    #[test]
    fn params_round_trip() {
        let c = CanonParams {
            a: vec![Rat::new(1.into(), 2.into()), Rat::from_integer((-3).into())],
            s: BTreeSet::from([1]),
            bar: false,
        };
        let text = params_to_json(&c);
        assert_eq!(text, r#"{"a":["1/2","-3"],"S":[1],"bar":false}"#);
        assert_eq!(params_from_json(&text).unwrap(), c);
    }
}
