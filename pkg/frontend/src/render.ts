/** SVG view of the provenance DAG. Statuses and confidences are rendered
 * verbatim from the state maps; no value is recomputed here. */

import type { AppState } from './app.js';
import { confidenceColor } from './colors.js';
import { computeLayout } from './layout.js';
import type { Appraisal, WireNode } from './types.js';

const SVG_NS = 'http://www.w3.org/2000/svg';
const NODE_W = 132;
const NODE_H = 46;

function el(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  return node;
}

function glyph(node: WireNode, x: number, y: number): SVGElement {
  if (node.kind === 'Entity') {
    return el('ellipse', {
      cx: String(x),
      cy: String(y),
      rx: String(NODE_W / 2),
      ry: String(NODE_H / 2),
      class: 'shape',
    });
  }
  if (node.kind === 'Activity') {
    return el('rect', {
      x: String(x - NODE_W / 2),
      y: String(y - NODE_H / 2),
      width: String(NODE_W),
      height: String(NODE_H),
      rx: '6',
      class: 'shape',
    });
  }
  const w = NODE_W / 2;
  const h = NODE_H / 2;
  const points = [
    [x - w, y + h],
    [x - w, y - h * 0.3],
    [x, y - h],
    [x + w, y - h * 0.3],
    [x + w, y + h],
  ]
    .map((p) => p.join(','))
    .join(' ');
  return el('polygon', { points, class: 'shape' });
}

function truncate(text: string, max = 24): string {
  return text.length <= max ? text : text.slice(0, max - 1) + '…';
}

export interface RenderCallbacks {
  onNodeHover: (id: string) => void;
  onNodeLeave: () => void;
  onNodeClick: (id: string) => void;
}

export function renderGraph(
  svg: SVGSVGElement,
  state: AppState,
  callbacks: RenderCallbacks,
): void {
  const subgraph = state.session.subgraph;
  const layout = computeLayout(subgraph);
  svg.innerHTML = '';
  svg.setAttribute('viewBox', `0 0 ${layout.width} ${layout.height}`);
  svg.setAttribute('width', String(layout.width));
  svg.setAttribute('height', String(layout.height));

  const defs = el('defs', {});
  const marker = el('marker', {
    id: 'arrow',
    viewBox: '0 0 10 10',
    refX: '9',
    refY: '5',
    markerWidth: '7',
    markerHeight: '7',
    orient: 'auto-start-reverse',
  });
  marker.appendChild(el('path', { d: 'M 0 0 L 10 5 L 0 10 z', class: 'arrowhead' }));
  defs.appendChild(marker);
  svg.appendChild(defs);

  const dimmed = (id: string): boolean =>
    state.emphasis !== null && !state.emphasis.has(id);

  const edgeLayer = el('g', { class: 'edges' });
  for (const edge of layout.flowEdges) {
    const a = layout.positions.get(edge.from);
    const b = layout.positions.get(edge.to);
    if (!a || !b) continue;
    const classes = ['edge'];
    if (edge.agentLink) classes.push('agent-link');
    if (dimmed(edge.from) || dimmed(edge.to)) classes.push('dimmed');
    const dx = (b.x - a.x) * 0.45;
    const path = el('path', {
      d: `M ${a.x + NODE_W / 2} ${a.y} C ${a.x + dx} ${a.y}, ${b.x - dx} ${b.y}, ${
        b.x - NODE_W / 2 - 6
      } ${b.y}`,
      class: classes.join(' '),
      'marker-end': 'url(#arrow)',
    });
    edgeLayer.appendChild(path);
  }
  svg.appendChild(edgeLayer);

  const appraisalsByNode = new Map<string, Appraisal[]>();
  for (const appraisal of state.session.appraisals) {
    const list = appraisalsByNode.get(appraisal.appraised) ?? [];
    list.push(appraisal);
    appraisalsByNode.set(appraisal.appraised, list);
  }

  const nodeLayer = el('g', { class: 'nodes' });
  const targets = new Set(subgraph.targets);
  for (const node of [...subgraph.nodes].sort((a, b) => (a.id < b.id ? -1 : 1))) {
    const pos = layout.positions.get(node.id);
    if (!pos) continue;
    const status = state.statuses[node.id] ?? 'Active';
    const value = state.confidence?.values[node.id];

    const classes = ['node', `kind-${node.kind.toLowerCase()}`];
    if (status === 'Refuted') classes.push('refuted');
    if (status === 'PartiallyAffected') classes.push('partial');
    if (targets.has(node.id)) classes.push('target');
    if (dimmed(node.id)) classes.push('dimmed');

    const group = el('g', {
      class: classes.join(' '),
      'data-node': node.id,
      'data-status': status,
      'data-confidence': value === undefined ? '' : String(value),
      transform: `translate(${pos.x}, ${pos.y})`,
    });

    const shape = glyph(node, 0, 0);
    if (status !== 'Refuted' && value !== undefined) {
      shape.setAttribute('fill', confidenceColor(value));
    }
    group.appendChild(shape);

    const label = el('text', { class: 'label', x: '0', y: '4' });
    label.textContent = truncate(node.label);
    const title = el('title', {});
    title.textContent =
      `${node.label}\n${node.kind} · ${status}` +
      (value !== undefined ? ` · confidence ${value}` : '');
    group.appendChild(title);
    group.appendChild(label);

    const appraisals = appraisalsByNode.get(node.id);
    if (appraisals && appraisals.length > 0) {
      const badge = el('g', { class: 'badge', 'data-badge': node.id });
      const cx = NODE_W / 2 - 6;
      const cy = -NODE_H / 2;
      const circle = el('circle', { cx: String(cx), cy: String(cy), r: '13' });
      circle.setAttribute('fill', confidenceColor(appraisals[0].confidence));
      badge.appendChild(circle);
      const text = el('text', { x: String(cx), y: String(cy + 3), class: 'badge-text' });
      text.textContent = appraisals[0].confidence.toFixed(appraisals[0].confidence === 1 ? 0 : 1);
      badge.appendChild(text);
      group.appendChild(badge);
    }

    group.addEventListener('mouseenter', () => callbacks.onNodeHover(node.id));
    group.addEventListener('mouseleave', () => callbacks.onNodeLeave());
    group.addEventListener('click', () => callbacks.onNodeClick(node.id));
    nodeLayer.appendChild(group);
  }
  svg.appendChild(nodeLayer);
}
