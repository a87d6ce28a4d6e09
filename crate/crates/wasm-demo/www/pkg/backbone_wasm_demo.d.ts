/* tslint:disable */
/* eslint-disable */

/**
 * Greedy backbone of a generated road-like grid at `budget_pct` percent of
 * the total cost.
 */
export function grid_backbone(rows: number, cols: number, pairs: number, seed: bigint, budget_pct: number, benefit: string, landmarks: number): string;

/**
 * Stretch at each budget percentage for both greedy variants and the baseline.
 */
export function stretch_curve(rows: number, cols: number, pairs: number, seed: bigint, steps: number): string;

/**
 * The two-hub network with its traffic betweenness scores and the
 * edge-betweenness greedy backbone at `budget`.
 */
export function two_hub(n: number, m: number, budget: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly grid_backbone: (a: number, b: number, c: number, d: bigint, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly stretch_curve: (a: number, b: number, c: number, d: bigint, e: number) => [number, number, number, number];
    readonly two_hub: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
