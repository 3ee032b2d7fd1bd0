//! A toolkit for combinatorial choice functions over a small finite ground set.
//!
//! The library revolves around total choice functions `C : 2^E -> 2^E` with
//! `C(S) ⊆ S`, represented either by an explicit table or by a named rule
//! (priority maximization, maximizer collecting, sequenced priorities with
//! rivalry, reserves, two-stage composition). On top of that sit:
//!
//! * [`axioms`] — decision procedures with counterexample witnesses for
//!   substitutability, irrelevance of rejected elements, path independence,
//!   size monotonicity, capacity filling, priority respect and their
//!   equivalent reformulations;
//! * [`lattice`] — the structure theory of path independent choice: maximal
//!   option sets, their lattice and Hasse diagram, and maximizer-collecting
//!   rationalizations;
//! * [`rules`] — constructors for the rule classes and the responsive
//!   rationalization procedure;
//! * [`revealed`] — pure choice models, revealed preference, WARP,
//!   rationalizability, and the faithful maps between combinatorial and pure
//!   models;
//! * [`demand`] — bundle demand at positive prices, the law of demand, demand
//!   WARP, and exact quasilinear rationalization of finite observations;
//! * [`matching`] — one-to-many matching with object-side choice rules, the
//!   choice-keeping and applicant-keeping deferred acceptance engines,
//!   stability notions, and brute-force enumeration;
//! * [`search`] — seeded counterexample search for the relationships the
//!   axioms deliberately leave open.
//!
//! Everything is deterministic: iteration follows the ground set's element
//! order, witnesses are the first found in that order, and randomized helpers
//! take explicit seeds.
//!
//! ```
//! use choicekit::axioms::{check_path_independence, Scan};
//! use choicekit::lattice::{am_eval, mc_rationalization};
//! use choicekit::{ChoiceFunction, GroundSet};
//!
//! // choose everything except from the full set, which keeps only {a, b}
//! let ground = GroundSet::new(["a", "b", "c"])?;
//! let full = ground.full();
//! let ab = ground.bundle_of_labels(["a", "b"])?;
//! let choice = ChoiceFunction::from_fn(ground.clone(), move |s| if s == full { ab } else { s });
//!
//! assert!(check_path_independence(&choice, Scan::exhaustive()).holds);
//! let orders = mc_rationalization(&choice).unwrap().orders;
//! assert_eq!(orders.len(), 4);
//! assert!(ground.bundles().all(|s| am_eval(&orders, s) == choice.eval(s)));
//! # Ok::<(), choicekit::GroundSetError>(())
//! ```

pub mod axioms;
pub mod choice;
pub mod demand;
pub mod gen;
pub mod ground;
pub mod lattice;
pub mod matching;
pub mod oracle;
pub mod relation;
pub mod revealed;
pub mod rules;
pub mod search;

pub use choice::{ChoiceBody, ChoiceError, ChoiceFunction};
pub use ground::{Bundle, GroundSet, GroundSetError};
pub use relation::{CycleError, LinearOrder, Relation};
