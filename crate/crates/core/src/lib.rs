//! Exact constructions and invariants of pointed braided tensor categories
//! presented by quantum-linear-space data over finite abelian groups.
//!
//! The library builds the bosonization Hopf algebra 𝔅(V)#k\[Γ\] from a datum
//! (Γ, r₀, V, r₁), equips it with the co-quasitriangular structure determined
//! by (r₀, r₁), verifies every braided/Hopf axiom exhaustively at desk scale,
//! and computes classification invariants: symmetric centers, ribbon
//! structures, 2-cocycle spaces, metric-quadruple equivalence and Drinfeld
//! doubles.  All arithmetic happens in one cyclotomic field ℚ(ζ_N); nothing
//! is floating point.
//!
//! ```
//! use qlspace_core::abgroup::{Bicharacter, Character, FinAbGroup};
//! use qlspace_core::qls::{BilinearForm, QlsDatum};
//! use qlspace_core::rform::{CqtMode, RForm};
//! use qlspace_core::scalar::CyclotomicContext;
//!
//! // the four-dimensional algebra: Z/2, the sign bicharacter, one generator
//! let ctx = CyclotomicContext::new(2);
//! let group = FinAbGroup::new(vec![2]);
//! let r0 = Bicharacter::new(&group, 2, vec![vec![1]]).unwrap();
//! let datum = QlsDatum::new(
//!     ctx.clone(),
//!     group.clone(),
//!     r0,
//!     vec![group.generator(0)],
//!     vec![Character::new(&group, &[1]).unwrap()],
//! )
//! .unwrap();
//! assert_eq!(datum.dim_hopf(), 4);
//!
//! let mut r1 = BilinearForm::zero(&ctx, 1);
//! r1.matrix[0][0] = ctx.from_int(7);
//! let rform = RForm::build(&datum, &r1).unwrap();
//! assert!(rform.verify_cqt(CqtMode::Full, 256).unwrap().all_pass());
//! ```

pub mod abgroup;
pub mod double;
pub mod hopf;
pub mod linalg;
pub mod presentation;
pub mod qls;
pub mod quadruple;
pub mod rform;
pub mod scalar;
pub mod snf;
pub mod symcenter;

pub use abgroup::{Bicharacter, Character, FinAbGroup, GroupElement, QuadraticForm, Subgroup};
pub use presentation::Presentation;
pub use qls::{BilinearForm, QlsDatum};
pub use quadruple::MetricQuadruple;
pub use rform::RForm;
pub use scalar::{CyclotomicContext, Scalar};
