// SPDX-License-Identifier: Apache-2.0
//! Benchmark inputs shared by the criterion targets.

use keven_core::qforms::is_fundamental;

/// Fundamental discriminants in `lo..hi`.
pub fn fundamental_discs(lo: i64, hi: i64) -> Vec<i64> {
    (lo..hi).filter(|&d| is_fundamental(d)).collect()
}
