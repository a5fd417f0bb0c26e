/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const entangled_fraction_vs_transparency: (a: number, b: number, c: number) => [number, number, number, number];
export const non_overlap_error_vs_power: (a: number, b: number, c: number) => [number, number, number, number];
export const srm_error_vs_bases: (a: number, b: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
