//! Mining translation-equivalent document pairs from two monolingual
//! collections.
//!
//! The pipeline lemmatizes documents with a morphological dictionary,
//! builds per-language frequency dictionaries, ranks each document's noun
//! lemmas with Okapi BM25 into a keyword profile, translates the profile
//! through a lemma dictionary, and pairs documents whose profiles share
//! enough keywords and whose surface statistics (length, capitalized words,
//! numbers) agree.

pub mod alignment;
pub mod config;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod freqdict;
pub mod io;
pub mod keywords;
pub mod morphology;
pub mod pipeline;
pub mod translation;

pub use alignment::{align, heuristic_filters, keyword_match, CandidatePair, MatchConfig};
pub use corpus::{surface_stats, tokenize, Document, SurfaceStats, TokenStream};
pub use error::{Error, Result};
pub use freqdict::FrequencyDictionary;
pub use keywords::{bm25_score, idf, Bm25Params, Extractor, KeywordProfile, StopList};
pub use morphology::{Analysis, MorphDictionary, Pos};
pub use translation::{RawTranslationTable, TranslationDictionary};
