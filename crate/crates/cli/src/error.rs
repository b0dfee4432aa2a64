use std::fmt;

use langrobust::corpus::CorpusError;
use langrobust::diversity::DiversityError;
use langrobust::metrics::MetricsError;
use langrobust::prealign::PrealignError;
use langrobust::probe::ProbeError;
use langrobust::providers::ProviderError;
use langrobust::quality::QualityError;
use langrobust::variantgen::VariantGenError;

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PROVIDER: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Usage,
    Provider,
    Validation,
}

/// An error tagged with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub kind: Kind,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn usage(msg: impl fmt::Display) -> Self {
        Self { kind: Kind::Usage, error: anyhow::anyhow!("{msg}") }
    }

    pub fn validation(msg: impl fmt::Display) -> Self {
        Self { kind: Kind::Validation, error: anyhow::anyhow!("{msg}") }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            Kind::Usage => EXIT_USAGE,
            Kind::Provider => EXIT_PROVIDER,
            Kind::Validation => EXIT_VALIDATION,
        }
    }

    pub fn context(self, ctx: impl fmt::Display + Send + Sync + 'static) -> Self {
        Self { kind: self.kind, error: self.error.context(ctx) }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

pub type CliResult<T> = Result<T, Failure>;

macro_rules! validation_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure { kind: Kind::Validation, error: e.into() }
            }
        }
    )*};
}

validation_from!(CorpusError, DiversityError, MetricsError, PrealignError, ProbeError, std::io::Error, serde_json::Error);

impl From<ProviderError> for Failure {
    fn from(e: ProviderError) -> Self {
        Failure { kind: Kind::Provider, error: e.into() }
    }
}

impl From<VariantGenError> for Failure {
    fn from(e: VariantGenError) -> Self {
        let kind = if matches!(e, VariantGenError::Provider(_)) { Kind::Provider } else { Kind::Validation };
        Failure { kind, error: e.into() }
    }
}

impl From<QualityError> for Failure {
    fn from(e: QualityError) -> Self {
        let kind = if matches!(e, QualityError::Provider(_)) { Kind::Provider } else { Kind::Validation };
        Failure { kind, error: e.into() }
    }
}
