//! JSON document format for [`Antiderivative`].
//!
//! ```json
//! {"domain_end": 2.0,
//!  "breakpoints": [0.0, 1.0, 2.0],
//!  "pieces": [[{"type": "poly", "re": [0, 1, 0, 0], "im": [0, 0, 0, 0]}],
//!             [{"type": "recip", "c_re": 1.0, "c_im": 0.0, "pole": -1.0}]],
//!  "jumps": [{"at": 1.0, "re": 0.5, "im": 0.0}]}
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Antiderivative, Jump, PieceTerm, C64};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum TermDoc {
    Poly {
        re: Vec<f64>,
        #[serde(default)]
        im: Vec<f64>,
    },
    Recip {
        c_re: f64,
        #[serde(default)]
        c_im: f64,
        pole: f64,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct JumpDoc {
    at: f64,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialDoc {
    domain_end: f64,
    breakpoints: Vec<f64>,
    pieces: Vec<Vec<TermDoc>>,
    #[serde(default)]
    jumps: Vec<JumpDoc>,
}

fn term_from_doc(t: TermDoc) -> Result<PieceTerm> {
    match t {
        TermDoc::Poly { re, im } => {
            if re.len() > 4 || im.len() > 4 {
                return Err(Error::validation("polynomial term has more than 4 coefficients"));
            }
            let mut c = [C64::new(0.0, 0.0); 4];
            for (k, v) in re.iter().enumerate() {
                c[k].re = *v;
            }
            for (k, v) in im.iter().enumerate() {
                c[k].im = *v;
            }
            Ok(PieceTerm::Poly(c))
        }
        TermDoc::Recip { c_re, c_im, pole } => Ok(PieceTerm::Recip { amp: C64::new(c_re, c_im), pole }),
    }
}

fn term_to_doc(t: &PieceTerm) -> TermDoc {
    match *t {
        PieceTerm::Poly(c) => TermDoc::Poly {
            re: c.iter().map(|z| z.re).collect(),
            im: c.iter().map(|z| z.im).collect(),
        },
        PieceTerm::Recip { amp, pole } => TermDoc::Recip { c_re: amp.re, c_im: amp.im, pole },
    }
}

pub fn from_json_str(text: &str) -> Result<Antiderivative> {
    let doc: PotentialDoc = serde_json::from_str(text)?;
    let pieces = doc
        .pieces
        .into_iter()
        .map(|terms| terms.into_iter().map(term_from_doc).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let jumps = doc
        .jumps
        .into_iter()
        .map(|j| Jump { at: j.at, delta: C64::new(j.re, j.im) })
        .collect();
    Antiderivative::new(doc.domain_end, doc.breakpoints, pieces, jumps)
}

pub fn to_json_string(s: &Antiderivative) -> Result<String> {
    let doc = PotentialDoc {
        domain_end: s.domain_end(),
        breakpoints: s.breakpoints().to_vec(),
        pieces: s.pieces().iter().map(|ts| ts.iter().map(term_to_doc).collect()).collect(),
        jumps: s
            .jumps()
            .iter()
            .map(|j| JumpDoc { at: j.at, re: j.delta.re, im: j.delta.im })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn read_file(path: &Path) -> Result<Antiderivative> {
    from_json_str(&std::fs::read_to_string(path)?)
}

pub fn write_file(s: &Antiderivative, path: &Path) -> Result<()> {
    std::fs::write(path, to_json_string(s)? + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_example() {
        let text = r#"{"domain_end": 2.0,
            "breakpoints": [0.0, 1.0, 2.0],
            "pieces": [[{"type": "poly", "re": [0, 1, 0, 0], "im": [0, 0, 0, 0]}],
                       [{"type": "recip", "c_re": 1.0, "c_im": 0.0, "pole": -1.0}]],
            "jumps": [{"at": 1.0, "re": 0.5, "im": 0.0}]}"#;
        let s = from_json_str(text).unwrap();
        assert_eq!(s.eval(0.5).unwrap(), C64::new(0.5, 0.0));
        assert!((s.eval(1.0).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = from_json_str("{\"domain_end\": 1.0,\n \"breakpoints\": [0, }").unwrap_err();
        match err {
            Error::Json(e) => assert_eq!(e.line(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invariant_violations_surface_as_validation() {
        let text = r#"{"domain_end": 1.0, "breakpoints": [0.0, 1.0], "pieces": [[]],
                       "jumps": [{"at": 0.4, "re": 1.0}]}"#;
        assert!(matches!(from_json_str(text), Err(Error::Validation(_))));
    }
}
