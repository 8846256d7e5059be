/** Factor sidebar: the four catalog dimensions, hover to isolate, click to
 * toggle refutation; plus the policy controls. */

import type { AppState } from './app.js';
import type { Factor, Policy, PolicyName } from './types.js';

export interface SidebarCallbacks {
  onFactorHover: (ref: string) => void;
  onFactorLeave: () => void;
  onFactorToggle: (ref: string) => void;
  onPolicyChange: (policy: Policy) => void;
}

const GROUPS: Array<{ title: string; pick: (s: AppState) => Factor[] }> = [
  { title: 'Agents', pick: (s) => s.session.catalog.agents },
  { title: 'Sources', pick: (s) => s.session.catalog.sources },
  { title: 'Source classes', pick: (s) => s.session.catalog.sourceClasses },
  { title: 'Operation classes', pick: (s) => s.session.catalog.operationClasses },
];

const POLICIES: PolicyName[] = ['min', 'max', 'avg'];

function policySelect(
  id: string,
  label: string,
  value: PolicyName,
  onInput: (value: PolicyName) => void,
): HTMLElement {
  const wrap = document.createElement('label');
  wrap.className = 'policy-control';
  wrap.textContent = label;
  const select = document.createElement('select');
  select.id = id;
  for (const name of POLICIES) {
    const option = document.createElement('option');
    option.value = name;
    option.textContent = name;
    option.selected = name === value;
    select.appendChild(option);
  }
  select.addEventListener('change', () => onInput(select.value as PolicyName));
  wrap.appendChild(select);
  return wrap;
}

export function renderSidebar(
  root: HTMLElement,
  state: AppState,
  callbacks: SidebarCallbacks,
): void {
  root.innerHTML = '';

  const policyBox = document.createElement('div');
  policyBox.className = 'policy-box';
  const heading = document.createElement('h2');
  heading.textContent = 'Propagation policy';
  policyBox.appendChild(heading);
  const change = (patch: Partial<Policy>) =>
    callbacks.onPolicyChange({ ...state.policy, ...patch });
  policyBox.appendChild(
    policySelect('policy-and', 'and', state.policy.andPolicy, (v) =>
      change({ andPolicy: v }),
    ),
  );
  policyBox.appendChild(
    policySelect('policy-or', 'or', state.policy.orPolicy, (v) => change({ orPolicy: v })),
  );
  policyBox.appendChild(
    policySelect('policy-agg', 'appraisals', state.policy.appraisalAggregator, (v) =>
      change({ appraisalAggregator: v }),
    ),
  );
  root.appendChild(policyBox);

  for (const group of GROUPS) {
    const factors = group.pick(state);
    const section = document.createElement('section');
    section.className = 'factor-group';
    const title = document.createElement('h2');
    title.textContent = group.title;
    section.appendChild(title);
    const list = document.createElement('ul');
    for (const factor of factors) {
      const item = document.createElement('li');
      item.className = 'factor';
      item.dataset.ref = factor.ref;
      if (state.isDisabled(factor.ref)) item.classList.add('disabled');
      if (state.involvedFactors !== null && !state.involvedFactors.has(factor.ref)) {
        item.classList.add('dimmed');
      }
      const name = document.createElement('span');
      name.className = 'factor-name';
      name.textContent = factor.key;
      const counts = document.createElement('span');
      counts.className = 'factor-counts';
      counts.title = `${factor.memberCount} member(s), mentioned in ${factor.environmentMentionCount} node environment(s)`;
      counts.textContent = `${factor.memberCount}/${factor.environmentMentionCount}`;
      item.appendChild(name);
      item.appendChild(counts);
      item.addEventListener('mouseenter', () => callbacks.onFactorHover(factor.ref));
      item.addEventListener('mouseleave', () => callbacks.onFactorLeave());
      item.addEventListener('click', () => callbacks.onFactorToggle(factor.ref));
      list.appendChild(item);
    }
    section.appendChild(list);
    root.appendChild(section);
  }
}
