//! Rule-based natural language generation.
//!
//! The pipeline has three stages: [`schema`] selects content and builds a
//! rhetorical [`ir::DocumentPlan`], [`sentplan`] groups messages into
//! sentences and plans references, and [`realize`] renders the sentence plans
//! as English text using the [`lexicon`].

pub mod cli;
pub mod ir;
pub mod lexicon;
pub mod realize;
pub mod schema;
pub mod sentplan;
