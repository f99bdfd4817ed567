//! JSON interchange format for systems.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrices::Matrix;
use crate::scalars::{Field, FieldDescriptor, PrimeField, Rationals};
use crate::tdcore::TdSystem;

pub const SYSTEM_FORMAT: &str = "tdlab/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssumeIrreducible {
    pub assume: bool,
    #[serde(default)]
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub format: String,
    pub field: FieldDescriptor,
    pub dimension: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    #[serde(rename = "Astar")]
    pub a_star: Vec<Vec<String>>,
    pub theta: Vec<String>,
    pub theta_star: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreducibility: Option<AssumeIrreducible>,
}

/// A system over whichever field its document names.
#[derive(Clone, Debug)]
pub enum AnySystem {
    Rational(TdSystem<Rationals>),
    Prime(TdSystem<PrimeField>),
}

fn doc_err(e: impl std::fmt::Display) -> Error {
    Error::Document(e.to_string())
}

fn parse_matrix<F: Field>(field: &F, n: usize, name: &str, rows: &[Vec<String>]) -> Result<Matrix<F>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::ShapeMismatch(format!("{name} is not {n}x{n}")));
    }
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|t| field.parse(t)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(field, parsed)
}

fn format_vec<F: Field>(field: &F, v: &[F::Elem]) -> Vec<String> {
    v.iter().map(|x| field.format(x)).collect()
}

impl SystemDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SystemDocument = serde_json::from_str(text).map_err(doc_err)?;
        if doc.format != SYSTEM_FORMAT {
            return Err(Error::Document(format!("unknown format {:?}", doc.format)));
        }
        doc.field.validated()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Document(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| Error::Document(format!("{}: {e}", path.display())))
    }

    pub fn from_system<F: Field>(sys: &TdSystem<F>) -> Self {
        let f = &sys.field;
        SystemDocument {
            format: SYSTEM_FORMAT.into(),
            field: f.descriptor(),
            dimension: sys.n(),
            a: sys.a.to_text(),
            a_star: sys.a_star.to_text(),
            theta: format_vec(f, &sys.thetas),
            theta_star: format_vec(f, &sys.thetas_star),
            q: sys.q_hint.as_ref().map(|q| f.format(q)),
            irreducibility: sys
                .assume_irreducible
                .as_ref()
                .map(|note| AssumeIrreducible { assume: true, note: note.clone() }),
        }
    }

    pub fn to_system<F: Field>(&self, field: &F) -> Result<TdSystem<F>> {
        if self.field != field.descriptor() {
            return Err(Error::FieldMismatch(self.field, field.descriptor()));
        }
        let n = self.dimension;
        let a = parse_matrix(field, n, "A", &self.a)?;
        let a_star = parse_matrix(field, n, "Astar", &self.a_star)?;
        let parse_all = |v: &[String]| v.iter().map(|t| field.parse(t)).collect::<Result<Vec<_>>>();
        let mut sys = TdSystem::new(field, a, a_star, parse_all(&self.theta)?, parse_all(&self.theta_star)?)?;
        sys.q_hint = self.q.as_deref().map(|t| field.parse(t)).transpose()?;
        sys.assume_irreducible = self.irreducibility.as_ref().filter(|flag| flag.assume).map(|flag| flag.note.clone());
        Ok(sys)
    }

    pub fn to_any(&self) -> Result<AnySystem> {
        match self.field.validated()? {
            FieldDescriptor::Rational => Ok(AnySystem::Rational(self.to_system(&Rationals)?)),
            FieldDescriptor::Prime { modulus } => Ok(AnySystem::Prime(self.to_system(&PrimeField::new(modulus)?)?)),
        }
    }

    /// The same document with every scalar in canonical form.
    pub fn canonical(&self) -> Result<Self> {
        Ok(match self.to_any()? {
            AnySystem::Rational(s) => Self::from_system(&s),
            AnySystem::Prime(s) => Self::from_system(&s),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const X1: &str = r#"{
  "format": "tdlab/1",
  "field": {"kind": "rational"},
  "dimension": 2,
  "A": [["1", "0"], ["1", "0"]],
  "Astar": [["1", "1"], ["0", "0"]],
  "theta": ["1", "0"],
  "theta_star": ["1", "0"]
}"#;

    #[test]
    fn load_and_roundtrip() {
        let doc = SystemDocument::from_json(X1).unwrap();
        let AnySystem::Rational(sys) = doc.to_any().unwrap() else {
            panic!("expected a rational system");
        };
        assert_eq!(sys.n(), 2);
        let canon = doc.canonical().unwrap();
        assert_eq!(canon, doc);
        let text = canon.to_json();
        let again = SystemDocument::from_json(&text).unwrap();
        assert_eq!(again.to_json(), text);
    }

    #[test]
    fn canonicalizes_scalars() {
        let doc = SystemDocument::from_json(&X1.replace(r#"["1", "0"], ["1", "0"]"#, r#"["2/2", "0"], ["01", "-0"]"#))
            .unwrap();
        let canon = doc.canonical().unwrap();
        assert_eq!(canon.a, vec![vec!["1", "0"], vec!["1", "0"]]);
        assert_eq!(canon.canonical().unwrap(), canon);
    }

    #[test]
    fn prime_field_document() {
        let text = r#"{"format":"tdlab/1","field":{"kind":"prime","modulus":13},"dimension":1,
            "A":[["18"]],"Astar":[["7"]],"theta":["5"],"theta_star":["7"],
            "irreducibility":{"assume":true,"note":"trivial"}}"#;
        let doc = SystemDocument::from_json(text).unwrap();
        let AnySystem::Prime(sys) = doc.to_any().unwrap() else {
            panic!("expected a prime-field system");
        };
        assert_eq!(*sys.a.get(0, 0), 5);
        assert_eq!(sys.assume_irreducible.as_deref(), Some("trivial"));
        assert_eq!(doc.canonical().unwrap().a, vec![vec!["5"]]);
    }

    #[test]
    fn rejects_malformed() {
        assert!(SystemDocument::from_json("{").is_err());
        assert!(SystemDocument::from_json(&X1.replace("tdlab/1", "tdlab/2")).is_err());
        assert!(SystemDocument::from_json(&X1.replace("\"dimension\"", "\"extra\": 1, \"dimension\"")).is_err());
        let bad_scalar = SystemDocument::from_json(&X1.replace(r#"["1", "1"]"#, r#"["1/0", "1"]"#)).unwrap();
        assert!(bad_scalar.to_any().is_err());
        let bad_shape = SystemDocument::from_json(&X1.replace("\"dimension\": 2", "\"dimension\": 3")).unwrap();
        assert!(matches!(bad_shape.to_any(), Err(Error::ShapeMismatch(_))));
        let bad_prime = X1.replace(r#"{"kind": "rational"}"#, r#"{"kind": "prime", "modulus": 12}"#);
        assert!(SystemDocument::from_json(&bad_prime).is_err());
    }
}
