//! Probabilities on propositional sentences from a simplicity prior over
//! claim-emitting machines.
//!
//! Stage `n` of the scheme samples a batch of random bitstrings, runs each as
//! a program on a small universal register machine, and accumulates the
//! emitted sentences into a claim set as long as the set stays "consistent
//! enough" for that stage. The probability of a sentence is the chance it
//! ends up in the claim set.

pub mod consistency;
pub mod estimator;
pub mod logic;
pub mod machine;
pub mod prover;
pub mod sequences;

pub use logic::{
    enumerate, parse_sentence, render_sentence, sentence_index, sentence_size, ParseError, Sentence, SentenceIndex, Theory,
};
pub use prover::{clausify, entails, is_theorem_bounded, refute_bounded, semantic_consistent, ProofBudget, RefutationResult};
