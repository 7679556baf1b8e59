#pragma once

namespace fracdpg {

// Worker count used by the OpenMP-parallel assembly loops. Without OpenMP
// support everything runs serially and these are no-ops.
void set_thread_count(int threads);
int thread_count();

/// Reads FRACDPG_THREADS (if set and positive) and applies it.
void apply_thread_env();

}  // namespace fracdpg
