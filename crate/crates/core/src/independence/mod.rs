//! Products of sections from two series, elimination certificates for their
//! independence, and a generic-coefficient rank oracle over a prime field.

mod certificate;
pub(crate) mod field;
pub(crate) mod oracle;
mod product;

pub use certificate::{certify_independence, CertifyError, Certificate, Discriminator, Liveness, Pass, Survivor};
pub use field::{is_prime, rank_mod_p, DEFAULT_PRIME};
pub use oracle::{oracle_rank, OracleConfig, OracleError, OracleReport};
pub use product::{product_sections, ProductAspect, ProductError, ProductSection, ProductSeries};
