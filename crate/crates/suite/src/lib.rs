//! The acceptance suite lives under `tests/`.
