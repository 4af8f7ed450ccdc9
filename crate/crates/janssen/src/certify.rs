//! Proposition-level certification drivers.
