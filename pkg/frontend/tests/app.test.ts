import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest';

import { App, parseSeeds } from '../src/app.js';
import { MockService } from './mock_service.js';

let mock: MockService;
let app: App;
let downloads: { filename: string; content: string }[];

function query(selector: string): HTMLElement {
  const node = document.querySelector<HTMLElement>(selector);
  if (node === null) {
    throw new Error(`missing element ${selector}`);
  }
  return node;
}

function textOf(selector: string): string {
  return query(selector).textContent ?? '';
}

function press(key: string): void {
  document.dispatchEvent(new KeyboardEvent('keydown', { key, bubbles: true }));
}

function submitForm(): void {
  const form = document.querySelector('form');
  if (form === null) {
    throw new Error('missing form');
  }
  form.dispatchEvent(new Event('submit', { bubbles: true, cancelable: true }));
}

async function bootApp(): Promise<void> {
  document.body.innerHTML = '<div id="app"></div>';
  downloads = [];
  app = new App(query('#app'), {
    download: (filename, content) => downloads.push({ filename, content }),
  });
  await app.boot();
}

async function startDemo(seeds = '#flu'): Promise<void> {
  (query('.corpus-select') as HTMLSelectElement).value = 'demo';
  (query('.seed-input') as HTMLInputElement).value = seeds;
  submitForm();
  await app.idle();
}

async function label(key: 'y' | 'n'): Promise<void> {
  press(key);
  await app.idle();
}

beforeEach(() => {
  mock = new MockService();
  vi.stubGlobal('fetch', mock.fetch as unknown as typeof fetch);
});

afterEach(() => {
  app.dispose();
  vi.unstubAllGlobals();
});

describe('start session form', () => {
  it('lists the corpora served by the service', async () => {
    await bootApp();
    const options = [...document.querySelectorAll<HTMLOptionElement>('.corpus-select option')];
    expect(options.map((o) => o.value)).toEqual(['broken', 'demo']);
    expect(options[1].textContent).toContain('20 tweets');
    expect((query('.start-button') as HTMLButtonElement).disabled).toBe(false);
  });

  it('rejects empty seeds inline without sending a request', async () => {
    await bootApp();
    await startDemo('   ');
    expect(textOf('.form-error')).toBe('enter at least one seed hashtag');
    expect(mock.requests.filter((r) => r.method === 'POST').length).toBe(0);
  });

  it('renders server-side validation errors inline', async () => {
    await bootApp();
    (query('.corpus-select') as HTMLSelectElement).value = 'broken';
    (query('.seed-input') as HTMLInputElement).value = '#flu';
    submitForm();
    await app.idle();
    expect(textOf('.form-error')).toBe("corpus 'broken' has no tweets");
    expect(document.querySelector('.session-form')).not.toBeNull();
  });

  it('shows an offline banner on boot failure and recovers on manual retry', async () => {
    mock.failNetwork = true;
    await bootApp();
    expect(textOf('.offline-banner')).toContain('service unreachable');
    const attempts = () => mock.requests.filter((r) => r.url === '/v1/corpora').length;
    expect(attempts()).toBe(1);
    await new Promise((resolve) => setTimeout(resolve, 20));
    expect(attempts()).toBe(1);

    mock.failNetwork = false;
    query('.retry-button').click();
    await app.idle();
    expect(attempts()).toBe(2);
    expect(document.querySelector('.offline-banner')).toBeNull();
    expect(document.querySelectorAll('.corpus-select option').length).toBe(2);
  });

  it('keyboard shortcuts are inert before a session starts', async () => {
    await bootApp();
    press('y');
    await app.idle();
    expect(mock.labelRequests().length).toBe(0);
  });
});

describe('labeling session', () => {
  it('renders the first candidate with context after starting', async () => {
    await bootApp();
    await startDemo();
    expect(textOf('.candidate-hashtag')).toBe('#cough');
    expect(textOf('.candidate-stats')).toContain('score 1.000');
    expect(textOf('.candidate-stats')).toContain('frequency 9');
    const marks = [...document.querySelectorAll('.sample-tweet mark')].map((m) => m.textContent);
    expect(marks).toContain('#cough');
    expect(textOf('.counter-positives')).toBe('positives: 0');
    expect(textOf('.counter-negatives')).toBe('negatives: 0');
    expect(textOf('.counter-remaining')).toBe('remaining: 6');
    expect(textOf('.session-meta')).toContain('seeds: flu');
  });

  it('accept and reject buttons update counters from the server', async () => {
    await bootApp();
    await startDemo();
    query('.accept-button').click();
    await app.idle();
    expect(textOf('.counter-positives')).toBe('positives: 1');
    expect(textOf('.candidate-hashtag')).toBe('#fever');

    query('.reject-button').click();
    await app.idle();
    expect(textOf('.counter-negatives')).toBe('negatives: 1');
    expect(textOf('.candidate-hashtag')).toBe('#vax');
    expect(document.querySelectorAll('.history-entry').length).toBe(2);
  });

  it('labels five candidates by keyboard and downloads a byte-identical export', async () => {
    await bootApp();
    await startDemo();

    const shown: string[] = [];
    for (const key of ['y', 'y', 'n', 'y', 'n'] as const) {
      shown.push(textOf('.candidate-hashtag'));
      await label(key);
    }
    expect(shown).toEqual(['#cough', '#fever', '#vax', '#chills', '#mask']);
    expect(new Set(shown).size).toBe(5);
    expect(textOf('.candidate-hashtag')).toBe('#zzz');
    expect(textOf('.counter-positives')).toBe('positives: 3');
    expect(textOf('.counter-negatives')).toBe('negatives: 2');
    expect(textOf('.counter-remaining')).toBe('remaining: 1');
    expect(document.querySelectorAll('.history-entry').length).toBe(5);

    query('.export-button').click();
    await app.idle();
    expect(downloads.length).toBe(1);
    expect(downloads[0].filename).toBe(`session-${mock.lastSessionId}.json`);

    const served = mock.exportText(mock.lastSessionId);
    expect(downloads[0].content).toBe(served);
    expect(new TextEncoder().encode(downloads[0].content)).toEqual(new TextEncoder().encode(served));

    const parsed = JSON.parse(downloads[0].content) as { history: unknown[]; positives: string[] };
    expect(parsed.history.length).toBe(5);
    expect(parsed.positives.sort()).toEqual(['chills', 'cough', 'fever', 'flu']);
  });

  it('disables actions while a label is in flight and drops double-clicks', async () => {
    await bootApp();
    await startDemo();
    const accept = query('.accept-button') as HTMLButtonElement;
    accept.click();
    expect((query('.accept-button') as HTMLButtonElement).disabled).toBe(true);
    accept.click();
    await app.idle();
    expect((query('.accept-button') as HTMLButtonElement).disabled).toBe(false);
    expect(mock.labelRequests().length).toBe(1);
    expect(document.querySelectorAll('.history-entry').length).toBe(1);
    expect(textOf('.candidate-hashtag')).toBe('#fever');
  });

  it('absorbs a conflict from another tab by refreshing server state', async () => {
    await bootApp();
    await startDemo();
    mock.labelDirect(mock.lastSessionId, 'cough', 'positive');

    query('.accept-button').click();
    await app.idle();
    expect(textOf('.notice')).toContain("'cough' already labeled positive");
    expect(textOf('.counter-positives')).toBe('positives: 1');
    expect(textOf('.candidate-hashtag')).toBe('#fever');
    expect(document.querySelectorAll('.history-entry').length).toBe(1);
    expect(mock.labelRequests().length).toBe(1);
  });

  it('exports twice without labeling and gets identical seeds-only files', async () => {
    await bootApp();
    await startDemo();
    query('.export-button').click();
    await app.idle();
    query('.export-button').click();
    await app.idle();
    expect(downloads.length).toBe(2);
    expect(downloads[0].content).toBe(downloads[1].content);
    const parsed = JSON.parse(downloads[0].content) as {
      seeds: string[];
      positives: string[];
      history: unknown[];
    };
    expect(parsed.history).toEqual([]);
    expect(parsed.seeds).toEqual(['flu']);
    expect(parsed.positives).toEqual(['flu']);
  });

  it('shows the exhausted state once every candidate is labeled', async () => {
    await bootApp();
    await startDemo();
    for (let i = 0; i < 6; i += 1) {
      await label('y');
    }
    expect(document.querySelector('.candidate-card')).toBeNull();
    expect(textOf('.exhausted')).toContain('exhausted');
    expect(textOf('.counter-remaining')).toBe('remaining: 0');

    press('y');
    await app.idle();
    expect(mock.labelRequests().length).toBe(6);
  });

  it('keeps the last acknowledged state through a network failure and resyncs on retry', async () => {
    await bootApp();
    await startDemo();
    mock.failNetwork = true;
    query('.accept-button').click();
    await app.idle();
    expect(textOf('.offline-banner')).toContain('service unreachable');
    expect(textOf('.candidate-hashtag')).toBe('#cough');

    mock.failNetwork = false;
    query('.retry-button').click();
    await app.idle();
    expect(document.querySelector('.offline-banner')).toBeNull();
    expect(textOf('.candidate-hashtag')).toBe('#cough');
    expect(document.querySelectorAll('.history-entry').length).toBe(0);
    expect(textOf('.counter-positives')).toBe('positives: 0');
  });
});

describe('parseSeeds', () => {
  it('splits on whitespace and commas and drops empties', () => {
    expect(parseSeeds('#flu, cough  #VAX')).toEqual(['#flu', 'cough', '#VAX']);
    expect(parseSeeds('   ')).toEqual([]);
    expect(parseSeeds('')).toEqual([]);
  });
});
