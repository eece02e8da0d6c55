/* tslint:disable */
/* eslint-disable */

/**
 * Kernel coefficients `α_0..α_m`.
 */
export function alpha(dim: number, m: number): Float64Array;

/**
 * First `k` Dirichlet eigenvalues of `L_m` on `(0, length)` with `cells` lattice cells.
 */
export function interval_spectrum(m: number, length: number, cells: number, k: number): Float64Array;

/**
 * Lower bound for `λ_{m,k}` at `k = 1..=k_max`; `lambda1` selects the case for odd `m`.
 */
export function lower_bound_curve(dim: number, m: number, volume: number, lambda1: number | null | undefined, k_max: number): Float64Array;

/**
 * `(2 ln r)^m` on `samples` points of `[r_min, r_max]`.
 */
export function symbol_curve(m: number, r_min: number, r_max: number, samples: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly alpha: (a: number, b: number) => [number, number, number, number];
    readonly interval_spectrum: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly lower_bound_curve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly symbol_curve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
