//! Interpretation files, one declaration per line:
//!
//! ```text
//! object Q dim 2 basis Z          # Z, X, Y, or custom = <unitary entries>
//! object R dim 3                  # no basis: caps, cups and boxes only
//! box f : 2x2 = 0 1 1 0           # row-major, outputs before inputs
//! tag f permutation               # unitary, permutation or phase
//! ```

use dualspider::hilb::{ComplexTensor, Interpretation};
use dualspider::rules::{Context, Tag};
use dualspider::structures::{builtin_dim, BasisStructure, Builtin};
use thiserror::Error;

use crate::lang::parse_complex;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct InterpError {
    pub line: usize,
    pub message: String,
}

/// A parsed file: the semantics for `eval`, and the dimensions and tags the
/// rewriter may rely on.
#[derive(Clone, Debug, Default)]
pub struct InterpFile {
    pub interpretation: Interpretation,
    pub context: Context,
}

fn entries(text: &str) -> Result<Vec<dualspider::C64>, String> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|w| !w.is_empty())
        .map(|w| parse_complex(w).ok_or_else(|| format!("bad complex entry `{w}`")))
        .collect()
}

fn shape(text: &str) -> Result<Vec<usize>, String> {
    text.split(['x', 'X', ','])
        .map(|w| w.trim().parse().map_err(|_| format!("bad shape `{text}`")))
        .collect()
}

fn object_line(words: &[&str], out: &mut InterpFile) -> Result<(), String> {
    let usage = || "expected `object <name> dim <d> [basis Z|X|Y|custom = <entries>]`".to_string();
    let (name, dim) = match words {
        [name, "dim", d, ..] => (*name, d.parse::<usize>().map_err(|_| usage())?),
        _ => return Err(usage()),
    };
    if dim == 0 {
        return Err("dimension must be positive".into());
    }
    out.context = std::mem::take(&mut out.context).dim(name, dim);
    let basis: Option<BasisStructure> = match &words[3..] {
        [] => None,
        ["basis", "custom", "=", rest @ ..] => {
            let u = ComplexTensor::new(vec![dim, dim], entries(&rest.join(" "))?).map_err(|e| e.to_string())?;
            Some(BasisStructure::from_basis(&u).map_err(|e| e.to_string())?)
        }
        ["basis", b] => {
            let b: Builtin = b.parse()?;
            Some(builtin_dim(b, dim).map_err(|e| e.to_string())?)
        }
        _ => return Err(usage()),
    };
    match basis {
        Some(s) => out.interpretation.set_basis(name, s).map_err(|e| e.to_string()),
        None => {
            out.interpretation.set_dim(name, dim);
            Ok(())
        }
    }
}

pub fn parse_interp(text: &str) -> Result<InterpFile, InterpError> {
    let mut out = InterpFile::default();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| InterpError { line: k + 1, message };
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "object" => object_line(&words[1..], &mut out).map_err(err)?,
            "box" => {
                let (head, body) = line.split_once('=').ok_or_else(|| err("expected `box <name> : <shape> = <entries>`".into()))?;
                let (name, dims) = head["box".len()..]
                    .split_once(':')
                    .ok_or_else(|| err("expected `box <name> : <shape> = <entries>`".into()))?;
                let t = ComplexTensor::new(shape(dims).map_err(err)?, entries(body).map_err(err)?).map_err(|e| err(e.to_string()))?;
                out.interpretation.set_box(name.trim(), t);
            }
            "tag" => match words[1..] {
                [name, tag] => {
                    let tag: Tag = tag.parse().map_err(err)?;
                    out.context = std::mem::take(&mut out.context).tag(name, tag);
                }
                _ => return Err(err("expected `tag <box> unitary|permutation|phase`".into())),
            },
            other => return Err(err(format!("unknown declaration `{other}`"))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use dualspider::diagram::Obj;
    use dualspider::hilb::c;

    #[test]
    fn full_file() {
        let f = parse_interp(
            "# qubit\nobject Q dim 2 basis Y\nobject R dim 3\nbox f : 2x2 = 0 1, 1 0\ntag f permutation\n",
        )
        .unwrap();
        assert_eq!(f.interpretation.dim(&Obj::new("R")).unwrap(), 3);
        assert!(f.interpretation.basis(&Obj::new("R")).is_err());
        assert!(f.interpretation.basis(&Obj::new("Q")).is_ok());
        assert_eq!(f.interpretation.box_tensor("f").unwrap().get(&[0, 1]), c(1.0, 0.0));
        assert!(f.context.has_tag("f", Tag::Permutation));
    }

    #[test]
    fn custom_basis() {
        let h = "0.7071067811865476 0.7071067811865476 0.7071067811865476 -0.7071067811865476";
        let f = parse_interp(&format!("object Q dim 2 basis custom = {h}")).unwrap();
        assert!(f.interpretation.basis(&Obj::new("Q")).is_ok());
        assert!(parse_interp("object Q dim 2 basis custom = 1 0 0 1i").is_ok());
        assert!(parse_interp("object Q dim 2 basis custom = 1 0 0").is_err());
        assert!(parse_interp("object Q dim 2 basis custom = 1 1 0 1").is_err());
    }

    #[test]
    fn errors_name_the_line() {
        for bad in ["object Q", "object Q dim 2 basis W", "box f : 2x2 = 1 2 3", "tag f loud", "frob Q"] {
            let e = parse_interp(&format!("\n{bad}")).unwrap_err();
            assert_eq!(e.line, 2, "{bad}: {e}");
        }
    }
}
