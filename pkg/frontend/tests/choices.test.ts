import { describe, expect, it } from 'vitest';
import { presentChoice } from '../src/choices';
import type { ChoiceRequest } from '../src/types';

describe('presentChoice', () => {
  it('maps anchor_selection candidates to their index', () => {
    const req: ChoiceRequest = {
      id: 3,
      kind: 'anchor_selection',
      candidates: [
        {
          production: 'add-treatment',
          anchor: { d: 'n1', u: 'u0' },
          assignments: { t: 'Appendectomy' },
          labels: ['Appendectomy'],
        },
        {
          production: 'add-empiric-tx',
          anchor: { f: 'n2', u: 'u0' },
          assignments: { t: 'Appendectomy' },
          labels: ['Appendectomy'],
        },
      ],
      context: { stage: 2, label: 'Appendectomy' },
    };
    const view = presentChoice(req);
    expect(view.title).toContain('Appendectomy');
    expect(view.title).toContain('stage 2');
    expect(view.options).toHaveLength(2);
    expect(view.options[0].label).toContain('add-treatment');
    expect(view.options[0].label).toContain('d→n1');
    expect(view.options.map((o) => o.answer)).toEqual([0, 1]);
    expect(view.decline).toBeUndefined();
  });

  it('offers -1 rejection for extension_confirmation', () => {
    const req: ChoiceRequest = {
      id: 5,
      kind: 'extension_confirmation',
      candidates: [{ component: ['a1'], map: { a1: 'n2' } }],
      context: { stage: 2, label: 'CT scan', production: 'add-test' },
    };
    const view = presentChoice(req);
    expect(view.title).toContain('add-test');
    expect(view.options[0].answer).toBe(0);
    expect(view.options[0].label).toContain('a1→n2');
    expect(view.decline?.answer).toBe(-1);
  });

  it('answers manual_classification with the class name or null', () => {
    const req: ChoiceRequest = {
      id: 0,
      kind: 'manual_classification',
      candidates: [{ class: '<disease>' }, { class: '<treatment>' }],
      context: { term: 'Gout' },
    };
    const view = presentChoice(req);
    expect(view.title).toContain('Gout');
    expect(view.options.map((o) => o.answer)).toEqual(['<disease>', '<treatment>']);
    expect(view.decline?.answer).toBeNull();
  });

  it('falls back to index answers for unknown kinds', () => {
    const req = {
      id: 9,
      kind: 'stem_selection',
      candidates: [{ stem: 'x' }],
      context: {},
    } as ChoiceRequest;
    const view = presentChoice(req);
    expect(view.options[0].answer).toBe(0);
  });
});
