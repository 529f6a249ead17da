import type { DiagramDoc, DiagramNode } from './types';

// Grid-to-pixel scaling. The service supplies integer layer coordinates
// (x = column towards the utility sink, y = row within the column); the
// client only scales them, it never re-layouts.
const CELL_W = 170;
const CELL_H = 80;
const MARGIN = 60;
const NODE_W = 120;
const NODE_H = 40;

const SIGN_GLYPHS: Record<string, string> = {
  plus: '+',
  minus: '-',
  unknown: '?',
};

export interface RenderOptions {
  /** Node ids to emphasize (candidate highlights while choosing). */
  highlight?: Set<string>;
}

function esc(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function center(node: DiagramNode): [number, number] {
  return [MARGIN + node.x * CELL_W + NODE_W / 2, MARGIN + node.y * CELL_H + NODE_H / 2];
}

function hexagonPoints(cx: number, cy: number): string {
  const w = NODE_W / 2;
  const h = NODE_H / 2;
  const inset = 14;
  const pts: [number, number][] = [
    [cx - w + inset, cy - h],
    [cx + w - inset, cy - h],
    [cx + w, cy],
    [cx + w - inset, cy + h],
    [cx - w + inset, cy + h],
    [cx - w, cy],
  ];
  return pts.map(([x, y]) => `${x},${y}`).join(' ');
}

function nodeShape(node: DiagramNode, highlighted: boolean): string {
  const [cx, cy] = center(node);
  const cls = `node node-${node.kind}${node.dark ? ' node-dark' : ''}${highlighted ? ' node-highlight' : ''}`;
  const fill = node.kind === 'chance' ? (node.dark ? '#404040' : '#e5e5e5') : '#ffffff';
  const stroke = highlighted ? '#d97706' : '#333333';
  const strokeWidth = highlighted ? 3 : 1.5;
  const common = `class="${cls}" fill="${fill}" stroke="${stroke}" stroke-width="${strokeWidth}"`;
  let shape: string;
  if (node.kind === 'decision') {
    shape = `<rect x="${cx - NODE_W / 2}" y="${cy - NODE_H / 2}" width="${NODE_W}" height="${NODE_H}" ${common}/>`;
  } else if (node.kind === 'utility') {
    shape = `<polygon points="${hexagonPoints(cx, cy)}" ${common}/>`;
  } else {
    shape = `<ellipse cx="${cx}" cy="${cy}" rx="${NODE_W / 2}" ry="${NODE_H / 2}" ${common}/>`;
  }
  const textFill = node.dark ? '#ffffff' : '#111111';
  const label = `<text x="${cx}" y="${cy + 4}" text-anchor="middle" font-size="12" fill="${textFill}">${esc(node.label)}</text>`;
  return `<g data-node-id="${esc(node.id)}">${shape}${label}</g>`;
}

function edgeLine(doc: DiagramDoc, from: string, to: string, sign: string): string {
  const byId = new Map(doc.nodes.map((n) => [n.id, n]));
  const a = byId.get(from);
  const b = byId.get(to);
  if (!a || !b) throw new Error(`edge references unknown node ${from} -> ${to}`);
  const [x1, y1] = center(a);
  const [x2, y2] = center(b);
  // shorten towards the target so the arrowhead is not buried in the shape
  const dx = x2 - x1;
  const dy = y2 - y1;
  const len = Math.hypot(dx, dy) || 1;
  const tx = x2 - (dx / len) * (NODE_W / 2 + 6);
  const ty = y2 - (dy / len) * (NODE_H / 2 + 6);
  const dashed = sign === 'info' ? ' stroke-dasharray="6 4"' : '';
  const line = `<line x1="${x1}" y1="${y1}" x2="${tx}" y2="${ty}" stroke="#555555" stroke-width="1.5" marker-end="url(#arrow)"${dashed} data-edge="${esc(from)}->${esc(to)}"/>`;
  const glyph = SIGN_GLYPHS[sign];
  if (!glyph) return line;
  const mx = (x1 + tx) / 2;
  const my = (y1 + ty) / 2;
  return (
    line +
    `<text x="${mx}" y="${my - 4}" text-anchor="middle" font-size="14" font-weight="bold" fill="#b91c1c">${glyph}</text>`
  );
}

/** Render a diagram document to an SVG markup string. */
export function renderDiagram(doc: DiagramDoc, opts: RenderOptions = {}): string {
  const highlight = opts.highlight ?? new Set<string>();
  const maxX = Math.max(0, ...doc.nodes.map((n) => n.x));
  const maxY = Math.max(0, ...doc.nodes.map((n) => n.y));
  const width = 2 * MARGIN + maxX * CELL_W + NODE_W;
  const height = 2 * MARGIN + maxY * CELL_H + NODE_H;
  const defs =
    '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" ' +
    'markerWidth="7" markerHeight="7" orient="auto-start-reverse">' +
    '<path d="M 0 0 L 10 5 L 0 10 z" fill="#555555"/></marker></defs>';
  const edges = doc.edges.map((e) => edgeLine(doc, e.from, e.to, e.sign)).join('');
  const nodes = doc.nodes.map((n) => nodeShape(n, highlight.has(n.id))).join('');
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
    `width="${width}" height="${height}" role="img">${defs}${edges}${nodes}</svg>`
  );
}

/** Node ids a choice candidate refers to, for highlighting. */
export function candidateNodeIds(candidate: Record<string, unknown>): Set<string> {
  const ids = new Set<string>();
  const anchor = candidate['anchor'];
  if (anchor && typeof anchor === 'object') {
    for (const v of Object.values(anchor as Record<string, string>)) ids.add(v);
  }
  const map = candidate['map'];
  if (map && typeof map === 'object') {
    for (const v of Object.values(map as Record<string, string>)) ids.add(v);
  }
  return ids;
}
