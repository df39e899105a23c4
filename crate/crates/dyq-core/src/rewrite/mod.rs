//! Normal ordering of products of currents under exchange-rule decks.

pub mod deck;
pub mod decks;
pub mod dy;
pub mod engine;
pub mod expr;
pub mod serre;
pub mod symbol;

pub use deck::{Deck, DeltaRule, FieldRule, LinRatio};
pub use engine::{check_zero, Engine, Order, Strategy};
pub use expr::{Delta, Expr, Key, Letter};
pub use symbol::{Base, Form, Kind, Sym};
