export { COLUMNS, CsvFormatError, HEADER_COMMENT, parseResultsCsv } from "./csv";
export type { ResultRow } from "./csv";
export { MANIFEST_HEADER, parseManifest, renderManifest } from "./manifest";
export type { ManifestSeries } from "./manifest";
export { manifestPathFor, render } from "./render";
export type { RenderResult } from "./render";
export { buildPanels, DEFAULT_ZOOM_M_MAX } from "./series";
export type { FigureKind, FigureSpec, Panel, Series } from "./series";
export { renderSvg } from "./svg";
