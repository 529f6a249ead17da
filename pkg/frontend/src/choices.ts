import type { ChoiceRequest } from './types';

// Pure presentation logic for pending choice requests: turn the wire
// candidates into labelled options whose `answer` can be posted back
// verbatim. No DOM here so the mapping is unit-testable.

export interface ChoiceOption {
  label: string;
  answer: unknown;
}

export interface ChoicePresentation {
  title: string;
  options: ChoiceOption[];
  /** Present when the request may be declined (answer posted as-is). */
  decline?: ChoiceOption;
}

function fmtMap(map: Record<string, string>): string {
  return Object.entries(map)
    .map(([k, v]) => `${k}→${v}`)
    .join(', ');
}

function anchorOption(cand: Record<string, unknown>, index: number): ChoiceOption {
  const production = String(cand['production'] ?? '?');
  const labels = Array.isArray(cand['labels']) ? (cand['labels'] as string[]).join(', ') : '';
  const anchor = (cand['anchor'] ?? {}) as Record<string, string>;
  const anchorText = Object.keys(anchor).length ? ` at ${fmtMap(anchor)}` : '';
  return { label: `${production} — places ${labels}${anchorText}`, answer: index };
}

function extensionOption(cand: Record<string, unknown>, index: number): ChoiceOption {
  const map = (cand['map'] ?? {}) as Record<string, string>;
  return { label: `attach via ${fmtMap(map)}`, answer: index };
}

export function presentChoice(req: ChoiceRequest): ChoicePresentation {
  const ctx = req.context ?? {};
  switch (req.kind) {
    case 'anchor_selection':
      return {
        title: `Choose how to place “${ctx['label']}” (stage ${ctx['stage']})`,
        options: req.candidates.map(anchorOption),
      };
    case 'extension_confirmation':
      return {
        title: `Confirm embedding for ${ctx['production']} (“${ctx['label']}”, stage ${ctx['stage']})`,
        options: req.candidates.map(extensionOption),
        decline: { label: 'reject all (no embedding)', answer: -1 },
      };
    case 'manual_classification':
      return {
        title: `Classify “${ctx['term']}”`,
        options: req.candidates.map((c) => ({
          label: String(c['class']),
          answer: String(c['class']),
        })),
        decline: { label: 'decline (leave unclassified)', answer: null },
      };
    default:
      return {
        title: `${req.kind} (request ${req.id})`,
        options: req.candidates.map((c, i) => ({ label: JSON.stringify(c), answer: i })),
      };
  }
}
