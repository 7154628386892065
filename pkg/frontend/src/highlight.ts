export type TweetSegment = {
  text: string;
  hashtag: boolean;
};

const HASHTAG_RE = /#[^\s#]+/g;

// Split tweet text into plain and hashtag segments. Concatenating the
// segment texts reproduces the input verbatim.
export function splitHashtags(text: string): TweetSegment[] {
  const segments: TweetSegment[] = [];
  let cursor = 0;
  for (const match of text.matchAll(HASHTAG_RE)) {
    const start = match.index ?? 0;
    if (start > cursor) {
      segments.push({ text: text.slice(cursor, start), hashtag: false });
    }
    segments.push({ text: match[0], hashtag: true });
    cursor = start + match[0].length;
  }
  if (cursor < text.length) {
    segments.push({ text: text.slice(cursor), hashtag: false });
  }
  return segments;
}

// Render a tweet as DOM nodes, hashtags wrapped in <mark>. Text nodes keep
// the original characters; nothing passes through innerHTML.
export function renderTweet(doc: Document, text: string): HTMLElement {
  const p = doc.createElement('p');
  p.className = 'sample-tweet';
  for (const segment of splitHashtags(text)) {
    if (segment.hashtag) {
      const mark = doc.createElement('mark');
      mark.textContent = segment.text;
      p.appendChild(mark);
    } else {
      p.appendChild(doc.createTextNode(segment.text));
    }
  }
  return p;
}
