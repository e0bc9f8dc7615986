//! Outcomes of identity checks.

use serde::Serialize;

/// Result of comparing two independently computed sides of an identity.
/// The rendered sides are kept only when they differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub identity: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
}

impl Verdict {
    pub fn compare<T: PartialEq>(
        identity: impl Into<String>,
        lhs: &T,
        rhs: &T,
        render: impl Fn(&T) -> String,
    ) -> Verdict {
        let holds = lhs == rhs;
        Verdict {
            identity: identity.into(),
            holds,
            lhs: (!holds).then(|| render(lhs)),
            rhs: (!holds).then(|| render(rhs)),
        }
    }

    pub fn pass(identity: impl Into<String>) -> Verdict {
        Verdict {
            identity: identity.into(),
            holds: true,
            lhs: None,
            rhs: None,
        }
    }

    /// Combines verdicts, keeping the first failure.
    pub fn all(identity: impl Into<String>, parts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let identity = identity.into();
        for v in parts {
            if !v.holds {
                return Verdict {
                    identity: format!("{identity}: {}", v.identity),
                    ..v
                };
            }
        }
        Verdict::pass(identity)
    }
}
