//! Holds the end-to-end acceptance run; see `tests/acceptance.rs`.
