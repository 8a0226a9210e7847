use serde_json::{json, Value};

/// Everything that ends a run early. Conformance mismatches exit with 3,
/// all other failures with 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] koszul_core::Error),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("cannot read {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(koszul_core::Error::ConformanceMismatch(_)) => 3,
            _ => 2,
        }
    }

    /// `{"kind": ..., "message": ..., "witness": ...}`.
    pub fn to_json(&self) -> Value {
        use koszul_core::Error as E;
        let (kind, witness) = match self {
            CliError::Core(e) => match e {
                E::DimensionMismatch { expected, found } => ("DimensionMismatch", json!({"expected": expected, "found": found})),
                E::IndexOutOfRange { index, dim } => ("IndexOutOfRange", json!({"index": index, "dim": dim})),
                E::NotSkew { i, j, k } => ("NotSkew", json!([i, j, k])),
                E::JacobiViolation { i, j, k } => ("JacobiViolation", json!([i, j, k])),
                E::SymmetryViolation { i, j } => ("SymmetryViolation", json!([i, j])),
                E::SingularMetric { rank, dim } => ("SingularMetric", json!({"rank": rank, "dim": dim})),
                E::NotTorsionFree => ("NotTorsionFree", Value::Null),
                E::NotFlat => ("NotFlat", Value::Null),
                E::NotKV => ("NotKV", Value::Null),
                E::NotAssociative => ("NotAssociative", Value::Null),
                E::NotSelfOrSkewAdjoint => ("NotSelfOrSkewAdjoint", Value::Null),
                E::TorsionMismatch { index } => ("TorsionMismatch", json!({"candidate": index})),
                E::NotRightIdeal { element, generator } => {
                    ("NotRightIdeal", json!({"element": element, "generator": generator}))
                }
                E::Unsupported(_) => ("Unsupported", Value::Null),
                E::ConformanceMismatch(_) => ("ConformanceMismatch", Value::Null),
                E::DomainViolation => ("DomainViolation", Value::Null),
                E::NonNormalized(total) => ("NonNormalized", json!(total)),
                E::SingularFisher => ("SingularFisher", Value::Null),
                E::ParseRational(_) => ("ParseRational", Value::Null),
                E::Invalid(_) => ("Invalid", Value::Null),
            },
            CliError::Validation(_) => ("Validation", Value::Null),
            CliError::Usage(_) => ("Usage", Value::Null),
            CliError::Io(_) => ("Io", Value::Null),
        };
        let mut out = json!({"kind": kind, "message": self.to_string()});
        if !witness.is_null() {
            out["witness"] = witness;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let mismatch = CliError::from(koszul_core::Error::ConformanceMismatch("routes disagree".into()));
        assert_eq!(mismatch.exit_code(), 3);
        assert_eq!(mismatch.to_json()["kind"], "ConformanceMismatch");
        assert_eq!(CliError::from(koszul_core::Error::NotKV).exit_code(), 2);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
    }
}
