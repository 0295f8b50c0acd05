/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const gainMap: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const outageCurves: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number, number, number];
export const regionMap: (a: number, b: number, c: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
