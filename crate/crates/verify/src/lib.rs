//! Holds the `acceptance` test target, which prints one PASS/FAIL line per
//! acceptance criterion:
//!
//! ```bash
//! cargo test -p qcluster-verify --test acceptance
//! ```
