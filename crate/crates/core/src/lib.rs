//! Balanced sparsest generator matrices for MDS codes.
//!
//! The pipeline is:
//!
//! 1. [`balancer::construct_balanced_support`] builds a `k x n` binary support
//!    matrix whose rows have weight `n - k + 1` (sparsest), whose column
//!    weights differ by at most one (balanced), and whose row unions satisfy
//!    the condition that lets the support carry an MDS code.
//! 2. [`codec::instantiate`] fills that support with random nonzero entries
//!    of a prime field large enough to guarantee success, rejecting draws
//!    until every `k x k` minor is nonzero.
//! 3. [`codec::GeneratorMatrix`] encodes messages and decodes received words
//!    with erasures or up to `floor((n - k) / 2)` errors.
//! 4. [`sensor_sim`] runs the encode / corrupt / decode loop for a network of
//!    `n` sensors measuring `k` conditions.

pub mod balancer;
pub mod codec;
pub mod finite_field;
pub mod rng;
pub mod sensor_sim;
pub mod support;

pub use balancer::{balance, construct_balanced_support, BalanceError, BalanceTrace, SwapRecord};
pub use codec::{
    instantiate, CodecError, DecodeResult, FieldChoice, GeneratorMatrix, GmFile, Instantiation,
    MdsVerdict,
};
pub use finite_field::{FieldElement, FieldError, FieldMatrix, PrimeField};
pub use sensor_sim::{run_simulation, SimulationConfig, SimulationError, SimulationReport};
pub use support::{P3Check, P3Witness, SupportError, SupportMatrix};
