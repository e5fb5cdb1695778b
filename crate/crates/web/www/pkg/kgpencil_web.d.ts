/* tslint:disable */
/* eslint-disable */

/**
 * Sampled curve with an optional closed-form companion.
 */
export class Curve {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly nu_minus: number;
    readonly nu_plus: number;
    /**
     * Empty when there is no closed form to compare with.
     */
    readonly reference: Float64Array;
    readonly x: Float64Array;
    readonly y: Float64Array;
}

export function gap_profile(ze2: number, l: number, n: number, points: number): Curve;

export function ground_state(ze2: number, n: number): Curve;

export function spectrum(ze2: number, l: number, n: number, count: number): Curve;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_curve_free: (a: number, b: number) => void;
    readonly curve_nu_minus: (a: number) => number;
    readonly curve_nu_plus: (a: number) => number;
    readonly curve_reference: (a: number) => [number, number];
    readonly curve_x: (a: number) => [number, number];
    readonly curve_y: (a: number) => [number, number];
    readonly gap_profile: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly ground_state: (a: number, b: number) => [number, number, number];
    readonly spectrum: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
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
