/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_curve_free: (a: number, b: number) => void;
export const curve_nu_minus: (a: number) => number;
export const curve_nu_plus: (a: number) => number;
export const curve_reference: (a: number) => [number, number];
export const curve_x: (a: number) => [number, number];
export const curve_y: (a: number) => [number, number];
export const gap_profile: (a: number, b: number, c: number, d: number) => [number, number, number];
export const ground_state: (a: number, b: number) => [number, number, number];
export const spectrum: (a: number, b: number, c: number, d: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
