import { api, ApiError } from './api.js';
import { renderTweet } from './highlight.js';
import { sessionView, type SessionView } from './view.js';
import type { CorpusInfo, ExportBody, LabelValue } from './types.js';

export const METHODS = ['keyselect', 'random_walk', 'degree_centrality', 'tfidf', 'word2vec'];

export type DownloadFn = (filename: string, content: string) => void;

export type AppOptions = {
  download?: DownloadFn;
};

function defaultDownload(filename: string, content: string): void {
  const blob = new Blob([content], { type: 'application/json' });
  const url = URL.createObjectURL(blob);
  const a = document.createElement('a');
  a.href = url;
  a.download = filename;
  document.body.appendChild(a);
  a.click();
  a.remove();
  URL.revokeObjectURL(url);
}

function el(doc: Document, tag: string, className: string | null, text?: string): HTMLElement {
  const node = doc.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function parseSeeds(raw: string): string[] {
  return raw
    .split(/[\s,]+/)
    .map((s) => s.trim())
    .filter((s) => s.length > 0);
}

type State = {
  phase: 'form' | 'session';
  corpora: CorpusInfo[] | null;
  formError: string | null;
  view: SessionView | null;
  notice: string | null;
  offline: string | null;
  busy: boolean;
};

export class App {
  private readonly root: HTMLElement;
  private readonly doc: Document;
  private readonly download: DownloadFn;
  private readonly onKeydown: (event: KeyboardEvent) => void;
  private state: State;
  private op: Promise<void> | null = null;

  constructor(root: HTMLElement, options: AppOptions = {}) {
    this.root = root;
    this.doc = root.ownerDocument;
    this.download = options.download ?? defaultDownload;
    this.state = {
      phase: 'form',
      corpora: null,
      formError: null,
      view: null,
      notice: null,
      offline: null,
      busy: false,
    };
    this.onKeydown = (event) => this.handleKey(event);
    this.doc.addEventListener('keydown', this.onKeydown);
    this.render();
  }

  dispose(): void {
    this.doc.removeEventListener('keydown', this.onKeydown);
  }

  // Resolves once no operation is in flight; lets tests await quiescence.
  async idle(): Promise<void> {
    while (this.op !== null) {
      await this.op;
    }
  }

  async boot(): Promise<void> {
    await this.run(() => this.loadCorpora());
  }

  // One user-triggered operation at a time; extra triggers are dropped, not
  // queued, so a double-click cannot send two mutations. Errors the actions
  // did not handle themselves land in the banner instead of escaping.
  private run(fn: () => Promise<void>): Promise<void> {
    if (this.op !== null) {
      return this.op;
    }
    this.state.busy = true;
    this.render();
    this.op = (async () => {
      try {
        await fn();
      } catch (err) {
        if (err instanceof ApiError) {
          this.state.notice = err.message;
        } else {
          this.state.offline = 'service unreachable';
        }
      } finally {
        this.op = null;
        this.state.busy = false;
        this.render();
      }
    })();
    return this.op;
  }

  private async loadCorpora(): Promise<void> {
    try {
      const corpora = await api.listCorpora();
      this.state.corpora = corpora;
      this.state.offline = null;
    } catch (err) {
      if (err instanceof ApiError) {
        this.state.formError = err.message;
      } else {
        this.state.offline = 'service unreachable';
      }
    }
  }

  private async startSession(corpusId: string, seedsRaw: string, method: string): Promise<void> {
    const seeds = parseSeeds(seedsRaw);
    if (corpusId === '') {
      this.state.formError = 'choose a corpus';
      return;
    }
    if (seeds.length === 0) {
      this.state.formError = 'enter at least one seed hashtag';
      return;
    }
    this.state.formError = null;
    try {
      const created = await api.createSession({ corpus_id: corpusId, seeds, method });
      await this.refreshView(created.session_id);
      this.state.phase = 'session';
      this.state.notice = null;
      this.state.offline = null;
    } catch (err) {
      if (err instanceof ApiError) {
        this.state.formError = err.message;
      } else {
        this.state.offline = 'service unreachable';
      }
    }
  }

  // Rebuild the whole view from fresh server responses; nothing is patched
  // locally, so the UI cannot drift from the service.
  private async refreshView(sessionId: string): Promise<void> {
    const [detail, next, exportedRaw] = await Promise.all([
      api.getSession(sessionId),
      api.nextCandidate(sessionId),
      api.exportRaw(sessionId),
    ]);
    const exported = JSON.parse(exportedRaw) as ExportBody;
    this.state.view = sessionView(detail, next, exported);
  }

  private async labelCurrent(label: LabelValue): Promise<void> {
    const view = this.state.view;
    if (view === null || view.candidate === null) {
      return;
    }
    try {
      await api.submitLabel(view.session_id, view.candidate.hashtag, label);
      await this.refreshView(view.session_id);
      this.state.notice = null;
      this.state.offline = null;
    } catch (err) {
      if (err instanceof ApiError) {
        // Conflicts and rejections resolve by re-syncing with the server.
        this.state.notice = err.message;
        await this.refreshView(view.session_id);
      } else {
        this.state.offline = 'service unreachable';
      }
    }
  }

  private async exportSession(): Promise<void> {
    const view = this.state.view;
    if (view === null) {
      return;
    }
    try {
      const raw = await api.exportRaw(view.session_id);
      this.download(`session-${view.session_id}.json`, raw);
      this.state.notice = null;
      this.state.offline = null;
    } catch (err) {
      if (err instanceof ApiError) {
        this.state.notice = err.message;
      } else {
        this.state.offline = 'service unreachable';
      }
    }
  }

  private async retry(): Promise<void> {
    this.state.offline = null;
    if (this.state.view !== null) {
      try {
        await this.refreshView(this.state.view.session_id);
      } catch {
        this.state.offline = 'service unreachable';
      }
    } else {
      await this.loadCorpora();
    }
  }

  private handleKey(event: KeyboardEvent): void {
    const target = event.target as HTMLElement | null;
    if (target && ['INPUT', 'TEXTAREA', 'SELECT'].includes(target.tagName)) {
      return;
    }
    if (this.state.phase !== 'session' || this.state.view?.candidate == null) {
      return;
    }
    if (event.key === 'y') {
      void this.run(() => this.labelCurrent('positive'));
    } else if (event.key === 'n') {
      void this.run(() => this.labelCurrent('negative'));
    }
  }

  private render(): void {
    this.root.textContent = '';
    if (this.state.offline !== null) {
      this.root.appendChild(this.renderOffline());
    }
    if (this.state.phase === 'form') {
      this.root.appendChild(this.renderForm());
    } else if (this.state.view !== null) {
      this.root.appendChild(this.renderSession(this.state.view));
    }
  }

  private renderOffline(): HTMLElement {
    const banner = el(this.doc, 'div', 'offline-banner', this.state.offline ?? '');
    const retry = el(this.doc, 'button', 'retry-button', 'Retry') as HTMLButtonElement;
    retry.type = 'button';
    retry.disabled = this.state.busy;
    retry.addEventListener('click', () => void this.run(() => this.retry()));
    banner.appendChild(retry);
    return banner;
  }

  private renderForm(): HTMLElement {
    const box = el(this.doc, 'div', 'session-form');
    box.appendChild(el(this.doc, 'h1', null, 'Keyword labeling console'));

    const form = this.doc.createElement('form');
    form.addEventListener('submit', (event) => {
      event.preventDefault();
      void this.run(() => this.startSession(corpusSelect.value, seedInput.value, methodSelect.value));
    });

    const corpusLabel = el(this.doc, 'label', null, 'Corpus');
    const corpusSelect = this.doc.createElement('select');
    corpusSelect.className = 'corpus-select';
    for (const corpus of this.state.corpora ?? []) {
      const option = this.doc.createElement('option');
      option.value = corpus.corpus_id;
      option.textContent =
        `${corpus.corpus_id} (${corpus.tweets} tweets, ${corpus.users} users, ` +
        `days ${corpus.day_range[0]}-${corpus.day_range[1]})`;
      corpusSelect.appendChild(option);
    }
    corpusLabel.appendChild(corpusSelect);

    const seedLabel = el(this.doc, 'label', null, 'Seed hashtags');
    const seedInput = this.doc.createElement('input');
    seedInput.className = 'seed-input';
    seedInput.type = 'text';
    seedInput.placeholder = '#flu #cough';
    seedLabel.appendChild(seedInput);

    const methodLabel = el(this.doc, 'label', null, 'Method');
    const methodSelect = this.doc.createElement('select');
    methodSelect.className = 'method-select';
    for (const method of METHODS) {
      const option = this.doc.createElement('option');
      option.value = method;
      option.textContent = method;
      methodSelect.appendChild(option);
    }
    methodLabel.appendChild(methodSelect);

    const submit = this.doc.createElement('button');
    submit.type = 'submit';
    submit.className = 'start-button';
    submit.textContent = 'Start session';
    submit.disabled = this.state.busy || this.state.corpora === null;

    form.append(corpusLabel, seedLabel, methodLabel, submit);
    box.appendChild(form);

    if (this.state.formError !== null) {
      box.appendChild(el(this.doc, 'div', 'form-error', this.state.formError));
    }
    return box;
  }

  private renderSession(view: SessionView): HTMLElement {
    const box = el(this.doc, 'div', 'session');

    const header = el(this.doc, 'div', 'session-header');
    header.appendChild(el(this.doc, 'h1', null, `Session ${view.session_id}`));
    header.appendChild(
      el(this.doc, 'p', 'session-meta', `${view.corpus_id} / ${view.method} / seeds: ${view.seeds.join(', ')}`),
    );
    box.appendChild(header);

    if (this.state.notice !== null) {
      box.appendChild(el(this.doc, 'div', 'notice', this.state.notice));
    }

    const counters = el(this.doc, 'div', 'counters');
    counters.appendChild(el(this.doc, 'span', 'counter-positives', `positives: ${view.counters.positives}`));
    counters.appendChild(el(this.doc, 'span', 'counter-negatives', `negatives: ${view.counters.negatives}`));
    counters.appendChild(el(this.doc, 'span', 'counter-remaining', `remaining: ${view.counters.remaining}`));
    box.appendChild(counters);

    if (view.candidate !== null) {
      const card = el(this.doc, 'div', 'candidate-card');
      card.appendChild(el(this.doc, 'h2', 'candidate-hashtag', `#${view.candidate.hashtag}`));
      card.appendChild(
        el(
          this.doc,
          'p',
          'candidate-stats',
          `score ${view.candidate.score.toFixed(3)} / frequency ${view.candidate.frequency} / ` +
            `co-occurs with positives in ${view.candidate.positive_cooccurrence} tweets`,
        ),
      );
      const samples = el(this.doc, 'div', 'sample-tweets');
      for (const tweet of view.candidate.sample_tweets) {
        samples.appendChild(renderTweet(this.doc, tweet));
      }
      card.appendChild(samples);

      const actions = el(this.doc, 'div', 'actions');
      const accept = el(this.doc, 'button', 'accept-button', 'Accept (y)') as HTMLButtonElement;
      accept.type = 'button';
      accept.disabled = this.state.busy;
      accept.addEventListener('click', () => void this.run(() => this.labelCurrent('positive')));
      const reject = el(this.doc, 'button', 'reject-button', 'Reject (n)') as HTMLButtonElement;
      reject.type = 'button';
      reject.disabled = this.state.busy;
      reject.addEventListener('click', () => void this.run(() => this.labelCurrent('negative')));
      actions.append(accept, reject);
      card.appendChild(actions);
      box.appendChild(card);
    } else {
      box.appendChild(el(this.doc, 'p', 'exhausted', 'Candidate queue exhausted.'));
    }

    const exportButton = el(this.doc, 'button', 'export-button', 'Download export') as HTMLButtonElement;
    exportButton.type = 'button';
    exportButton.disabled = this.state.busy;
    exportButton.addEventListener('click', () => void this.run(() => this.exportSession()));
    box.appendChild(exportButton);

    const historyBox = el(this.doc, 'div', 'history');
    historyBox.appendChild(el(this.doc, 'h2', null, `History (${view.history.length})`));
    const list = el(this.doc, 'ol', 'history-list');
    for (const entry of view.history) {
      list.appendChild(
        el(
          this.doc,
          'li',
          `history-entry history-${entry.label}`,
          `#${entry.hashtag}: ${entry.label} (round ${entry.round}, score ${entry.score.toFixed(3)})`,
        ),
      );
    }
    historyBox.appendChild(list);
    box.appendChild(historyBox);

    return box;
  }
}
