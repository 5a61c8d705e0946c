use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] reeb_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{what}: {source}")]
    Json {
        what: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("{what}: {source}")]
    Io {
        what: String,
        #[source]
        source: std::io::Error,
    },

    #[error("building is not a valid cylindrical building ({0} violation(s))")]
    NotCylindrical(usize),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        use reeb_core::Error as E;
        match self {
            CliError::Core(e) => match e {
                E::DegenerateTie(_) => "degenerate_tie",
                E::SecondOrderAmbiguity(_) => "second_order_ambiguity",
                E::NonPositiveDivisor(_) => "non_positive_divisor",
                E::InvalidEllipsoid(_) => "invalid_ellipsoid",
                E::InvalidCobordism(_) => "invalid_cobordism",
                E::InvalidData(_) => "invalid_data",
                E::InvalidArgument(_) => "invalid_argument",
                E::InvalidBuilding(_) => "invalid_building",
                E::Parse(_) => "parse",
                E::MultiplicityOverflow(_) => "multiplicity_overflow",
            },
            CliError::Usage(_) => "usage",
            CliError::Json { .. } => "json",
            CliError::Io { .. } => "io",
            CliError::NotCylindrical(_) => "not_cylindrical",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(reeb_core::Error::DegenerateTie(_)) => 3,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }

    pub fn json(what: impl Into<String>, source: serde_json::Error) -> Self {
        let msg = source.to_string();
        if msg.starts_with("degenerate tie:") {
            return CliError::Core(reeb_core::Error::DegenerateTie(
                msg.trim_start_matches("degenerate tie:").trim().into(),
            ));
        }
        CliError::Json { what: what.into(), source }
    }
}
